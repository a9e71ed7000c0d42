#include "gsing/birational.hpp"

#include <cmath>

namespace gsing {

std::shared_ptr<const OrientationPipeline> OrientationPipeline::build(const Architecture& arch,
                                                                      const Orientation& orient) {
    auto pl = std::make_shared<OrientationPipeline>();
    pl->arch = arch;
    pl->orient = orient;
    pl->surface = cubic_surface(arch, orient);
    pl->map = std::make_shared<const TwistMap>(arch, orient);
    pl->quadric = quadric_equations(arch, orient, *pl->map);
    try {
        pl->param = std::make_shared<const QuadricParametrization>(pl->quadric);
    } catch (const Error& e) {
        pl->param_error = e.what();
    }
    return pl;
}

namespace {

template <class T>
struct Cramer {
    Vec3<T> rows[3];
    Vec3<T> rhs;
};

template <class T, class Conv>
Cramer<T> cramer_system(const OrientationPipeline& pl, const std::array<T, 6>& tw, Conv conv) {
    Vec3<T> omega{tw[0], tw[1], tw[2]}, v{tw[3], tw[4], tw[5]};
    auto C = limb_offsets(pl.arch, pl.orient);
    Cramer<T> cs;
    cs.rows[0] = v;
    cs.rhs[0] = T(0);
    for (std::size_t r = 0; r < 2; ++r) {
        std::size_t i = pl.quadric.dep.basis[r];
        Vec3<T> a = conv(pl.arch.base[i]), c = conv(C[i]);
        cs.rows[1 + r] = cross(omega, a);
        cs.rhs[1 + r] = T(-dot(v, c) - mixed(omega, a, c));
    }
    return cs;
}

template <class T>
std::array<T, 4> cramer_solve(const Cramer<T>& cs) {
    auto det3 = [](const Vec3<T>& r0, const Vec3<T>& r1, const Vec3<T>& r2) { return mixed(r0, r1, r2); };
    std::array<T, 4> out;
    out[0] = det3(cs.rows[0], cs.rows[1], cs.rows[2]);
    for (std::size_t k = 0; k < 3; ++k) {
        Vec3<T> r[3] = {cs.rows[0], cs.rows[1], cs.rows[2]};
        for (std::size_t i = 0; i < 3; ++i) r[i][k] = cs.rhs[i];
        out[1 + k] = det3(r[0], r[1], r[2]);
    }
    return out;
}

Vec3d conv_d(const Vec3Q& a) { return to_double(a); }
Vec3Q conv_q(const Vec3Q& a) { return a; }
Vec3c conv_c(const Vec3Q& a) { return {a[0].get_d(), a[1].get_d(), a[2].get_d()}; }

}  // namespace

std::array<Rat, 4> pos_homogeneous(const OrientationPipeline& pl, const TwistQ& twist) {
    return cramer_solve(cramer_system<Rat>(pl, twist, conv_q));
}

std::array<double, 4> pos_homogeneous(const OrientationPipeline& pl, const std::array<double, 6>& twist) {
    return cramer_solve(cramer_system<double>(pl, twist, conv_d));
}

Vec3Q pos(const OrientationPipeline& pl, const TwistQ& twist) {
    auto res = quadric_membership_exact(pl.quadric, twist);
    if (res[0] != 0 || res[1] != 0 || res[2] != 0) fail(ErrorKind::domain, "twist not on Q");
    auto h = pos_homogeneous(pl, twist);
    if (h[0] == 0) fail(ErrorKind::domain, "indeterminacy point of Pos");
    return {Rat(h[1] / h[0]), Rat(h[2] / h[0]), Rat(h[3] / h[0])};
}

double cramer_relative_det(const OrientationPipeline& pl, const std::array<double, 6>& twist) {
    auto cs = cramer_system<double>(pl, twist, conv_d);
    double bound = norm(cs.rows[0]) * norm(cs.rows[1]) * norm(cs.rows[2]);
    double det = mixed(cs.rows[0], cs.rows[1], cs.rows[2]);
    return bound > 0 ? std::abs(det) / bound : 0;
}

double cramer_relative_det(const OrientationPipeline& pl, const std::array<cplx, 6>& twist) {
    auto cs = cramer_system<cplx>(pl, twist, conv_c);
    double bound = norm(cs.rows[0]) * norm(cs.rows[1]) * norm(cs.rows[2]);
    cplx det = mixed(cs.rows[0], cs.rows[1], cs.rows[2]);
    return bound > 0 ? std::abs(det) / bound : 0;
}

PosResult pos(const OrientationPipeline& pl, const std::array<double, 6>& twist, double tol) {
    if (quadric_membership(pl.quadric, twist).max_relative() > tol) fail(ErrorKind::domain, "twist not on Q");
    PosResult r;
    r.relative_det = cramer_relative_det(pl, twist);
    if (r.relative_det <= tol) fail(ErrorKind::domain, "indeterminacy point of Pos");
    auto h = pos_homogeneous(pl, twist);
    r.P = {h[1] / h[0], h[2] / h[0], h[3] / h[0]};
    return r;
}

RoundTripReport rec_pos_roundtrip_report(const OrientationPipeline& pl, std::size_t n, std::uint64_t seed,
                                         double tol) {
    RoundTripReport rep;
    if (n == 0) return rep;

    if (auto t0 = pl.map->rec_exact(Vec3Q{})) {
        try {
            rep.exact_origin = pos(pl, *t0) == Vec3Q{};
        } catch (const Error&) {
            rep.exact_origin = false;
        }
    }

    const double L = characteristic_length(pl.arch);
    for (const auto& P : sample_surface_points(pl.surface, n, seed, 2 * L, 31)) {
        try {
            auto rec = pl.map->rec(P, tol);
            auto back = pos(pl, rec.twist.coords(), tol);
            double err = norm(back.P - P);
            rep.max_pos_rec_abs = std::max(rep.max_pos_rec_abs, err);
            rep.max_pos_rec = std::max(rep.max_pos_rec, err / (1 + norm(P)));
            ++rep.samples_surface;
        } catch (const Error&) {
            ++rep.skipped;
        }
    }

    if (pl.param) {
        Rng rng(seed, 32);
        std::size_t attempts = 0;
        while (rep.samples_quadric < n && attempts++ < 4 * n) {
            double s = rng.normal(), t = rng.normal();
            auto tw = normalize_twist_coords(pl.param->evaluate(s, t));
            try {
                auto P = pos(pl, tw, tol);
                auto rec = pl.map->rec(P.P, tol);
                rep.max_rec_pos = std::max(rep.max_rec_pos, projective_distance(tw, rec.twist.coords()));
                ++rep.samples_quadric;
            } catch (const Error&) {
                ++rep.skipped;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------- parametrization

SingularityParametrization::SingularityParametrization(std::shared_ptr<const OrientationPipeline> pl)
    : pl_(std::move(pl)) {
    if (!pl_->param) fail(ErrorKind::degenerate, pl_->param_error.empty() ? "Q cannot be parametrized" : pl_->param_error);
}

std::optional<Vec3Q> SingularityParametrization::evaluate(const Rat& s, const Rat& t) const {
    auto tw = pl_->param->evaluate(s, t);
    if (!tw) return std::nullopt;
    auto h = pos_homogeneous(*pl_, *tw);
    if (h[0] == 0) return std::nullopt;
    return Vec3Q{Rat(h[1] / h[0]), Rat(h[2] / h[0]), Rat(h[3] / h[0])};
}

std::optional<Vec3d> SingularityParametrization::evaluate(double s, double t) const {
    auto raw = pl_->param->evaluate(s, t);
    if (std::all_of(raw.begin(), raw.end(), [](double x) { return x == 0; })) return std::nullopt;
    auto tw = normalize_twist_coords(raw);
    if (cramer_relative_det(*pl_, tw) <= 1e-12) return std::nullopt;
    auto h = pos_homogeneous(*pl_, tw);
    return Vec3d{h[1] / h[0], h[2] / h[0], h[3] / h[0]};
}

const std::array<MultiPoly, 4>& SingularityParametrization::rational_functions() const {
    std::call_once(fns_once_, [&] {
        auto tw = pl_->param->polynomials();
        auto to_poly_st = [](const Vec3Q& a) { return to_poly(a); };
        auto cs = cramer_system<MultiPoly>(*pl_, tw, to_poly_st);
        auto h = cramer_solve(cs);
        const VarSet st{Var::s, Var::t};
        fns_ = {h[1].declare(st), h[2].declare(st), h[3].declare(st), h[0].declare(st)};
    });
    return fns_;
}

std::shared_ptr<const OrientationPipeline> Se3Parametrization::pipeline(const Rat& p, const Rat& q, const Rat& r) {
    std::array<std::string, 3> key{to_string(p), to_string(q), to_string(r)};
    {
        std::lock_guard lock(mu_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto pl = OrientationPipeline::build(arch_, cayley_rotation(p, q, r));
    std::lock_guard lock(mu_);
    return cache_.emplace(key, pl).first->second;
}

std::size_t Se3Parametrization::cached() const {
    std::lock_guard lock(mu_);
    return cache_.size();
}

std::optional<SingularPose> Se3Parametrization::evaluate(const Rat& p, const Rat& q, const Rat& r, const Rat& s,
                                                         const Rat& t) {
    auto pl = pipeline(p, q, r);
    SingularityParametrization sp(pl);
    auto P = sp.evaluate(s, t);
    if (!P) return std::nullopt;
    return SingularPose{pl->orient, *P};
}

Rat singularity_residual_exact(const Architecture& arch, const Orientation& orient, const Vec3Q& P) {
    auto C = limb_offsets(arch, orient);
    QMatrix J(6, 6);
    for (std::size_t i = 0; i < 6; ++i) {
        Vec3Q dir = C[i] + P;
        Vec3Q mom = cross(arch.base[i], dir);
        for (std::size_t k = 0; k < 3; ++k) {
            J(i, k) = dir[k];
            J(i, 3 + k) = mom[k];
        }
    }
    return J.determinant();
}

}  // namespace gsing
