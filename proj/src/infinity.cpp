#include "gsing/infinity.hpp"

#include <cmath>

namespace gsing {

namespace {

std::array<cplx, kVarCount> cpoint(const std::array<cplx, 3>& d) { return position_point<cplx>(d[0], d[1], d[2]); }

std::array<cplx, 3> normalize3(std::array<cplx, 3> d) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(d[i]) > std::abs(d[k])) k = i;
    cplx piv = d[k];
    for (auto& x : d) x /= piv;
    return d;
}

template <std::size_t N>
double relative_norm(const std::array<CompiledPoly<double>, N>& f, const std::array<cplx, kVarCount>& pt) {
    double num = 0, mag = 0;
    for (const auto& p : f) {
        num += std::norm(p(pt));
        mag += p.magnitude(pt);
    }
    return mag > 0 ? std::sqrt(num) / mag : 0;
}

double pdist3(const std::array<cplx, 3>& a, const std::array<cplx, 3>& b) {
    double na = 0, nb = 0, w = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
        for (std::size_t j = i + 1; j < 3; ++j) w += std::norm(a[i] * b[j] - a[j] * b[i]);
    }
    return std::sqrt(w / (na * nb));
}

}  // namespace

double match_directions(const std::vector<std::array<cplx, 3>>& points,
                        const std::vector<std::array<cplx, 3>>& targets) {
    double worst = 0;
    for (const auto& p : points) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& t : targets) best = std::min(best, pdist3(p, t));
        worst = std::max(worst, best);
    }
    return worst;
}

InfinityModel infinity_model(const OrientationPipeline& pl, double tol) {
    InfinityModel m;
    const auto& inf = pl.map->infinity();
    m.H3 = pl.surface.H3;
    m.L = inf.L;
    m.v_inf = inf.v_inf;

    TwistPolys fb = pl.map->cofactor_row(m.fallback_row).graded_part(3);
    m.fallback_v = fb.v;
    if (auto g = factor_position(fb.omega))
        m.fallback_factor = *g;
    else
        m.flags.push_back("cubic fallback: Omega part does not factor as g(P) * P");

    if (m.H3.is_zero()) {
        m.flags.push_back("H3 vanishes identically");
        return m;
    }
    if (m.L.is_zero()) {
        m.flags.push_back("L vanishes identically: Omega_inf = 0");
        return m;
    }

    // H3 on the line L = 0, parametrized as s e1 + t e2
    Vec3Q l{m.L.coeff(Monomial::of(Var::x)), m.L.coeff(Monomial::of(Var::y)), m.L.coeff(Monomial::of(Var::z))};
    auto e = projection_basis(l);
    MultiPoly s = MultiPoly::variable(Var::s), t = MultiPoly::variable(Var::t);
    MultiPoly h = m.H3;
    std::array<Var, 3> xyz{Var::x, Var::y, Var::z};
    std::array<MultiPoly, 3> sub;
    for (std::size_t k = 0; k < 3; ++k) sub[k] = s * e[0][k] + t * e[1][k];
    for (std::size_t k = 0; k < 3; ++k) h = h.substitute(xyz[k], sub[k]);
    if (h.is_zero()) {
        m.flags.push_back("L divides H3: the line L = 0 lies on the curve at infinity");
        return m;
    }
    std::vector<double> coeffs(4, 0.0);  // in s with t = 1, low to high
    for (const auto& [mono, c] : h.terms()) coeffs[mono[Var::s]] = c.get_d();
    std::vector<std::array<cplx, 3>> dirs;
    auto ed0 = to_double(e[0]), ed1 = to_double(e[1]);
    for (const auto& r : poly_roots(coeffs))
        dirs.push_back({r * ed0[0] + ed1[0], r * ed0[1] + ed1[1], r * ed0[2] + ed1[2]});
    int deficit = 3;
    while (deficit > 0 && coeffs[static_cast<std::size_t>(deficit)] == 0) --deficit;
    for (int k = deficit; k < 3; ++k) dirs.push_back({ed0[0], ed0[1], ed0[2]});

    CompiledPoly<double> h3c(m.H3);
    std::array<CompiledPoly<double>, 3> vc{CompiledPoly<double>(m.v_inf[0]), CompiledPoly<double>(m.v_inf[1]),
                                           CompiledPoly<double>(m.v_inf[2])};
    std::array<CompiledPoly<double>, 6> fc;
    {
        auto c = fb.coords();
        for (std::size_t k = 0; k < 6; ++k) fc[k] = CompiledPoly<double>(c[k]);
    }
    for (auto d : dirs) {
        d = normalize3(d);
        auto pt = cpoint(d);
        IndeterminationPoint ip;
        ip.direction = d;
        double hm = h3c.magnitude(pt);
        ip.h3_residual = hm > 0 ? std::abs(h3c(pt)) / hm : 0;
        ip.v_inf_norm = relative_norm(vc, pt);
        ip.fallback_norm = relative_norm(fc, pt);
        ip.real = std::abs(d[0].imag()) + std::abs(d[1].imag()) + std::abs(d[2].imag()) <= 1e-8;
        m.line_points.push_back(ip);
        if (ip.v_inf_norm <= tol) {
            m.indetermination.push_back(ip);
            if (ip.fallback_norm <= tol) m.flags.push_back("extension undefined: cubic fallback vanishes too");
        }
    }
    if (m.indetermination.size() != 2)
        m.flags.push_back("expected 2 indetermination points, found " + std::to_string(m.indetermination.size()));
    return m;
}

SelfReciprocityReport self_reciprocity_sweep(const OrientationPipeline& pl, const InfinityModel& model, std::size_t n,
                                             std::uint64_t seed, double tol) {
    SelfReciprocityReport rep;
    CompiledPoly<double> h3c(model.H3);
    std::array<CompiledPoly<double>, 3> vc{CompiledPoly<double>(model.v_inf[0]),
                                           CompiledPoly<double>(model.v_inf[1]),
                                           CompiledPoly<double>(model.v_inf[2])};
    auto check = [&](const Vec3d& P, bool count) {
        auto r = pl.map->rec_infinity(P, 1e-10);
        const auto& tw = r.twist;
        double self = std::abs(dot(tw.omega, tw.v));
        double no = norm(tw.omega), nv = norm(tw.v), np = norm(P);
        double axis = 0;
        if (no > 1e-6)
            axis = norm(cross(tw.omega, P)) / (no * np);
        else
            axis = std::abs(dot(tw.v, P)) / (nv * np);
        auto pt = position_point(P[0], P[1], P[2]);
        double vp = 0, mag = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            vp += vc[k](pt) * P[k];
            mag += vc[k].magnitude(pt) * std::abs(P[k]);
        }
        double q = quadric_membership(pl.quadric, tw.coords()).max_relative();
        if (count) {
            ++rep.samples;
            rep.fallback_used += r.used_fallback;
            rep.max_self_reciprocity = std::max(rep.max_self_reciprocity, self);
            rep.max_axis_deviation = std::max(rep.max_axis_deviation, axis);
            rep.max_vp = std::max(rep.max_vp, mag > 0 ? std::abs(vp) / mag : 0);
            rep.max_quadric = std::max(rep.max_quadric, q);
            if (self > tol || axis > tol || q > tol) ++rep.failures;
        }
        return std::pair{r, self};
    };

    Rng rng(seed, 41);
    std::size_t attempts = 0;
    while (rep.samples < n && attempts++ < 20 * n + 20) {
        std::array<double, 3> o{rng.normal(), rng.normal(), rng.normal()}, d{rng.normal(), rng.normal(), rng.normal()};
        auto c = cubic_along_line(h3c, o, d);
        for (double tau : real_roots({c[0], c[1], c[2], c[3]})) {
            Vec3d P{o[0] + tau * d[0], o[1] + tau * d[1], o[2] + tau * d[2]};
            if (norm(P) < 1e-6) continue;
            P = (1 / norm(P)) * P;
            try {
                check(P, true);
            } catch (const Error&) {
                ++rep.samples;
                ++rep.failures;
            }
            if (rep.samples == n) break;
        }
    }

    for (const auto& ip : model.line_points) {
        if (!ip.real) continue;
        Vec3d P{ip.direction[0].real(), ip.direction[1].real(), ip.direction[2].real()};
        P = (1 / norm(P)) * P;
        try {
            auto [r, self] = check(P, false);
            if (ip.v_inf_norm > tol) {
                ++rep.translations_checked;
                double res = std::max(norm(r.twist.omega), std::abs(dot(r.twist.v, P)) / norm(r.twist.v));
                rep.max_translation_residual = std::max(rep.max_translation_residual, res);
            } else {
                ++rep.indetermination_checked;
                rep.max_indetermination_self_reciprocity = std::max(rep.max_indetermination_self_reciprocity, self);
            }
        } catch (const Error&) {
            ++rep.failures;
        }
    }
    return rep;
}

}  // namespace gsing
