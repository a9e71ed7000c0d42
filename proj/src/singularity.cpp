#include "gsing/singularity.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <optional>

namespace gsing {

PolyMatrix jacobian_matrix(const Architecture& arch, const Orientation& orient) {
    PolyMatrix jac(6, 6);
    auto P = position_vector();
    auto C = limb_offsets(arch, orient);
    for (std::size_t i = 0; i < 6; ++i) {
        Vec3<MultiPoly> dir = to_poly(C[i]) + P;
        Vec3<MultiPoly> mom = cross(to_poly(arch.base[i]), dir);
        for (std::size_t k = 0; k < 3; ++k) {
            jac(i, k) = dir[k].declare(kPositionVars);
            jac(i, 3 + k) = mom[k].declare(kPositionVars);
        }
    }
    return jac;
}

CubicSurface cubic_surface(const Architecture& arch, const Orientation& orient) {
    CubicSurface s;
    s.arch = arch;
    s.orient = orient;
    s.det = det_laplace3(jacobian_matrix(arch, orient));
    if (s.det.is_zero()) fail(ErrorKind::degenerate, "identically singular architecture: det(Jac) = 0");
    s.degree = s.det.degree();
    if (s.degree > 3) fail(ErrorKind::consistency, "det(Jac) has degree " + std::to_string(s.degree) + " > 3");
    s.degenerate = s.degree < 3;
    s.F = s.det.normalize_projective();
    s.F_h = s.F.homogenize(Var::w, 3);
    s.H3 = s.F.graded_part(kPositionVars, 3);
    return s;
}

namespace {

// [U, V, P] as a linear form in P: (U x V) . P
MultiPoly bracket_with_position(const Vec3Q& u, const Vec3Q& v) {
    Vec3Q n = cross(u, v);
    MultiPoly f(kPositionVars);
    f += MultiPoly(n[0]) * MultiPoly::variable(Var::x);
    f += MultiPoly(n[1]) * MultiPoly::variable(Var::y);
    f += MultiPoly(n[2]) * MultiPoly::variable(Var::z);
    return f;
}

MultiPoly infinity_sum(const std::array<Vec3Q, 6>& A, const std::array<Vec3Q, 6>& B) {
    // [A_a, A_b, P], [A_a, B_a, P], [B_a, B_b, P]
    std::array<std::array<MultiPoly, 6>, 6> AA, BB;
    std::array<MultiPoly, 6> AB;
    for (std::size_t a = 0; a < 6; ++a) {
        AB[a] = bracket_with_position(A[a], B[a]);
        for (std::size_t b = 0; b < 6; ++b) {
            AA[a][b] = bracket_with_position(A[a], A[b]);
            BB[a][b] = bracket_with_position(B[a], B[b]);
        }
    }
    MultiPoly sum = s6_sum(
        [&](const SignedPermutation& sp) {
            const auto& p = sp.p;
            MultiPoly t = AA[p[0]][p[1]] * AB[p[2]] * BB[p[3]][p[4]];
            return sp.sign > 0 ? t : -t;
        },
        MultiPoly(kPositionVars));
    return sum * Rat(-1, 4);
}

}  // namespace

InfinityCubic infinity_cubic(const CubicSurface& surface) {
    InfinityCubic h;
    h.graded = surface.det.graded_part(kPositionVars, 3);
    h.b_form = infinity_sum(surface.arch.base, rotated_platform(surface.arch, surface.orient));
    h.c_form = infinity_sum(surface.arch.base, limb_offsets(surface.arch, surface.orient));
    if (h.graded.is_zero()) {
        if (!h.b_form.is_zero() || !h.c_form.is_zero())
            fail(ErrorKind::consistency, "infinity cubic: graded part vanishes but permutation sums do not");
        return h;
    }
    h.normalized = h.graded.normalize_projective();
    if (h.b_form.is_zero() || h.c_form.is_zero() || !(h.b_form.normalize_projective() == h.normalized) ||
        !(h.c_form.normalize_projective() == h.normalized))
        fail(ErrorKind::consistency, "infinity cubic: graded part and permutation sums disagree");
    return h;
}

Rat hexagon_sum(const std::array<Vec2Q, 6>& alpha, const std::array<Vec2Q, 6>& beta) {
    auto br = [](const Vec2Q& u, const Vec2Q& v) { return Rat(u[0] * v[1] - u[1] * v[0]); };
    std::array<std::array<Rat, 6>, 6> aa, bb;
    std::array<Rat, 6> ab;
    for (std::size_t i = 0; i < 6; ++i) {
        ab[i] = br(alpha[i], beta[i]);
        for (std::size_t j = 0; j < 6; ++j) {
            aa[i][j] = br(alpha[i], alpha[j]);
            bb[i][j] = br(beta[i], beta[j]);
        }
    }
    Rat sum = 0;
    for (const auto& sp : permutations6()) {
        const auto& p = sp.p;
        Rat t = aa[p[0]][p[1]] * bb[p[2]][p[3]] * ab[p[4]];
        if (sp.sign > 0)
            sum += t;
        else
            sum -= t;
    }
    return sum;
}

std::array<Vec3Q, 2> projection_basis(const Vec3Q& dir) {
    if (dir == Vec3Q{}) fail(ErrorKind::domain, "projection direction is zero");
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return abs(dir[i]) < abs(dir[j]); });
    Rat pp = dot(dir, dir);
    std::array<Vec3Q, 2> basis;
    for (std::size_t k = 0; k < 2; ++k) {
        Vec3Q e;
        e[order[k]] = 1;
        Vec3Q u = e - Rat(dot(e, dir) / pp) * dir;
        if (k == 1) u = u - Rat(dot(u, basis[0]) / dot(basis[0], basis[0])) * basis[0];
        basis[k] = u;
    }
    return basis;
}

Rat hexagon_criterion(const Architecture& arch, const Orientation& orient, const Vec3Q& dir) {
    auto basis = projection_basis(dir);
    auto B = rotated_platform(arch, orient);
    std::array<Vec2Q, 6> alpha, beta;
    for (std::size_t i = 0; i < 6; ++i) {
        alpha[i] = {dot(arch.base[i], basis[0]), dot(arch.base[i], basis[1])};
        beta[i] = {dot(B[i], basis[0]), dot(B[i], basis[1])};
    }
    return hexagon_sum(alpha, beta);
}

SingularTest is_singular(const CubicSurface& surface, const Vec3d& P, double tol) {
    auto pt = position_point(P[0], P[1], P[2]);
    double value = surface.F.evaluate(pt);
    double scale = 1 + surface.F.magnitude(pt);
    double residual = std::abs(value) / scale;
    return {residual <= tol, residual};
}

std::vector<Vec3d> sample_surface_points(const CubicSurface& surface, std::size_t n, std::uint64_t seed,
                                         double half_width, std::uint64_t stream) {
    std::vector<Vec3d> out;
    if (n == 0) return out;
    CompiledPoly<double> f(surface.F);
    CompiledPoly<Quad> fq(surface.F);
    Rng rng(seed, stream);
    std::size_t attempts = 0;
    while (out.size() < n && attempts < 100 * n + 100) {
        ++attempts;
        std::array<double, 3> o, d;
        for (int i = 0; i < 3; ++i) o[i] = rng.uniform(-half_width, half_width);
        double dn = 0;
        for (int i = 0; i < 3; ++i) {
            d[i] = rng.normal();
            dn += d[i] * d[i];
        }
        dn = std::sqrt(dn);
        for (int i = 0; i < 3; ++i) d[i] /= dn;
        auto c = cubic_along_line(f, o, d);
        std::optional<std::array<Quad, 4>> cq;
        for (double t : real_roots({c[0], c[1], c[2], c[3]})) {
            if (std::abs(t) > 2 * half_width) continue;
            // double roots of the interpolated cubic sit ~1e-12 off the surface
            if (!cq) cq = cubic_along_line(fq, std::array<Quad, 3>{o[0], o[1], o[2]}, std::array<Quad, 3>{d[0], d[1], d[2]});
            const auto& q = *cq;
            Quad tq = t;
            for (int it = 0; it < 4; ++it) {
                Quad g = ((q[3] * tq + q[2]) * tq + q[1]) * tq + q[0];
                Quad dg = (3 * q[3] * tq + 2 * q[2]) * tq + q[1];
                if (dg == 0) break;
                tq -= g / dg;
            }
            t = static_cast<double>(tq);
            out.push_back({o[0] + t * d[0], o[1] + t * d[1], o[2] + t * d[2]});
            if (out.size() == n) break;
        }
    }
    return out;
}

std::array<std::array<double, 6>, 6> numeric_jacobian(const Architecture& arch, const Orientation& orient,
                                                      const Vec3d& P) {
    auto screws = limb_screws(arch, orient, P);
    std::array<std::array<double, 6>, 6> J;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t k = 0; k < 3; ++k) {
            J[i][k] = screws[i].direction[k];
            J[i][3 + k] = screws[i].moment[k];
        }
    return J;
}

SmoothnessReport smoothness_probe(const CubicSurface& surface, std::size_t n_samples, std::uint64_t seed, double tol) {
    SmoothnessReport rep;
    rep.min_gradient = std::numeric_limits<double>::infinity();
    rep.min_fifth_singular = std::numeric_limits<double>::infinity();
    if (n_samples == 0) {
        rep.min_gradient = rep.min_fifth_singular = 0;
        return rep;
    }
    std::array<MultiPoly, 3> grad{surface.F.derivative(Var::x), surface.F.derivative(Var::y),
                                  surface.F.derivative(Var::z)};
    const double L = characteristic_length(surface.arch);
    auto pts = sample_surface_points(surface, n_samples, seed, 2 * L, 17);
    for (const auto& P : pts) {
        auto pt = position_point(P[0], P[1], P[2]);
        double g2 = 0, scale = 0;
        for (const auto& g : grad) {
            double v = g.evaluate(pt);
            g2 += v * v;
            scale += g.magnitude(pt);
        }
        rep.min_gradient = std::min(rep.min_gradient, std::sqrt(g2) / (1 + scale));

        auto J = numeric_jacobian(surface.arch, surface.orient, P);
        Eigen::Matrix<double, 6, 6> M;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) M(i, j) = J[i][j];
        Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(M);
        auto sv = svd.singularValues();
        double s5 = sv(4) / sv(0), s6 = sv(5) / sv(0);
        rep.min_fifth_singular = std::min(rep.min_fifth_singular, s5);
        rep.max_sixth_singular = std::max(rep.max_sixth_singular, s6);
        if (s5 > 1e-7 && s6 < 1e-7) ++rep.rank_five;
        ++rep.samples;
    }
    if (rep.samples == 0) rep.min_gradient = rep.min_fifth_singular = 0;
    rep.possibly_singular = rep.samples > 0 && (rep.min_gradient < tol || rep.rank_five < rep.samples);
    return rep;
}

}  // namespace gsing
