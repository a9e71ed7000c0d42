#include "gsing/twistmap.hpp"

#include <cmath>
#include <map>

namespace gsing {

TwistPolys TwistPolys::graded_part(unsigned k) const {
    TwistPolys g;
    for (std::size_t i = 0; i < 3; ++i) {
        g.omega[i] = omega[i].graded_part(kPositionVars, k);
        g.v[i] = v[i].graded_part(kPositionVars, k);
    }
    return g;
}

int TwistPolys::degree() const {
    int d = -1;
    for (const auto& p : coords()) d = std::max(d, p.degree());
    return d;
}

bool TwistPolys::is_zero() const {
    for (const auto& p : coords())
        if (!p.is_zero()) return false;
    return true;
}

TwistPolys twist_cofactor_row(const PolyMatrix& jac, std::size_t row) {
    TwistPolys t;
    for (std::size_t k = 0; k < 3; ++k) {
        t.v[k] = cofactor(jac, row, k).declare(kPositionVars);
        t.omega[k] = cofactor(jac, row, 3 + k).declare(kPositionVars);
    }
    return t;
}

TwistPolys twist_column_sums(const PolyMatrix& jac) {
    TwistPolys t;
    for (std::size_t k = 0; k < 3; ++k) {
        t.v[k] = MultiPoly(kPositionVars);
        t.omega[k] = MultiPoly(kPositionVars);
    }
    for (std::size_t i = 0; i < 6; ++i) {
        TwistPolys r = twist_cofactor_row(jac, i);
        for (std::size_t k = 0; k < 3; ++k) {
            t.v[k] += r.v[k];
            t.omega[k] += r.omega[k];
        }
    }
    return t;
}

namespace {

struct LimbPolys {
    std::array<Vec3<MultiPoly>, 6> U;  // C_i + P
    std::array<Vec3<MultiPoly>, 6> W;  // A_i x (C_i + P)
};

LimbPolys limb_polys(const Architecture& arch, const Orientation& orient) {
    LimbPolys lp;
    auto C = limb_offsets(arch, orient);
    auto P = position_vector();
    for (std::size_t i = 0; i < 6; ++i) {
        lp.U[i] = to_poly(C[i]) + P;
        lp.W[i] = cross(to_poly(arch.base[i]), lp.U[i]);
    }
    return lp;
}

Vec3<MultiPoly> zero_vec() { return {MultiPoly(kPositionVars), MultiPoly(kPositionVars), MultiPoly(kPositionVars)}; }

struct VecSum {
    Vec3<MultiPoly> acc = zero_vec();
    VecSum& operator+=(const VecSum& o) {
        acc += o.acc;
        return *this;
    }
};

Vec3<MultiPoly> scaled(const Vec3<MultiPoly>& v, const MultiPoly& s, int sign) {
    Vec3<MultiPoly> r{v[0] * s, v[1] * s, v[2] * s};
    return sign > 0 ? r : -r;
}

}  // namespace

TwistPolys twist_quadratic_bundle(const Architecture& arch, const Orientation& orient) {
    LimbPolys lp = limb_polys(arch, orient);

    std::array<std::array<Vec3<MultiPoly>, 6>, 6> UxU, WxW;
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b)
            if (a != b) {
                UxU[a][b] = cross(lp.U[a], lp.U[b]);
                WxW[a][b] = cross(lp.W[a], lp.W[b]);
            }
    // Mixed products keyed by the ordered triple; computed once per triple.
    std::map<std::array<std::uint8_t, 3>, MultiPoly> mixedU, mixedW;
    for (const auto& sp : permutations6()) {
        std::array<std::uint8_t, 3> lo{sp.p[0], sp.p[1], sp.p[2]}, hi{sp.p[3], sp.p[4], sp.p[5]};
        if (!mixedU.count(lo)) mixedU[lo] = mixed(lp.U[lo[0]], lp.U[lo[1]], lp.U[lo[2]]);
        if (!mixedW.count(hi)) mixedW[hi] = mixed(lp.W[hi[0]], lp.W[hi[1]], lp.W[hi[2]]);
    }

    VecSum t1 = s6_sum(
        [&](const SignedPermutation& sp) {
            const auto& p = sp.p;
            return VecSum{scaled(UxU[p[1]][p[2]], mixedW.at({p[3], p[4], p[5]}), sp.sign)};
        },
        VecSum{});
    VecSum t2 = s6_sum(
        [&](const SignedPermutation& sp) {
            const auto& p = sp.p;
            return VecSum{scaled(WxW[p[3]][p[4]], mixedU.at({p[0], p[1], p[2]}), sp.sign)};
        },
        VecSum{});

    TwistPolys out;
    const Rat twelfth(1, 12);
    for (std::size_t k = 0; k < 3; ++k) {
        out.v[k] = t1.acc[k] * twelfth;
        out.omega[k] = t2.acc[k] * twelfth;
    }
    if (out.degree() > 2)
        fail(ErrorKind::consistency, "quadratic twist bundle: terms of degree " + std::to_string(out.degree()) +
                                         " failed to cancel");
    return out;
}

std::optional<MultiPoly> factor_position(const Vec3<MultiPoly>& f) {
    auto P = position_vector();
    bool all_zero = f[0].is_zero() && f[1].is_zero() && f[2].is_zero();
    if (all_zero) return MultiPoly(kPositionVars);
    auto g = f[0].divide_by(Monomial::of(Var::x));
    if (!g) return std::nullopt;
    g->declare(kPositionVars);
    for (std::size_t k = 0; k < 3; ++k)
        if (!(*g * P[k] == f[k])) return std::nullopt;
    return g;
}

namespace {

MultiPoly bracket_p(const Vec3Q& u, const Vec3Q& v) {
    Vec3Q n = cross(u, v);
    return MultiPoly(n[0]) * MultiPoly::variable(Var::x) + MultiPoly(n[1]) * MultiPoly::variable(Var::y) +
           MultiPoly(n[2]) * MultiPoly::variable(Var::z);
}

}  // namespace

InfinityForms twist_infinity_forms(const Architecture& arch, const Orientation& orient, const TwistPolys& quadratic) {
    InfinityForms f;
    TwistPolys g = quadratic.graded_part(2);
    f.v_inf = g.v;
    f.omega_inf = g.omega;
    auto L = factor_position(f.omega_inf);
    if (!L) fail(ErrorKind::consistency, "Omega_inf does not factor as L(P) * P");
    f.L = *L;

    // Direct permutation formulas for the same forms.
    const auto& A = arch.base;
    auto C = limb_offsets(arch, orient);
    VecSum v_direct = s6_sum(
        [&](const SignedPermutation& sp) {
            const auto& p = sp.p;
            MultiPoly s = bracket_p(A[p[0]], A[p[1]]) * bracket_p(A[p[2]], C[p[2]]);
            return VecSum{scaled(to_poly(cross(C[p[3]], C[p[4]])), s, sp.sign)};
        },
        VecSum{});
    MultiPoly L_direct = s6_sum(
        [&](const SignedPermutation& sp) {
            const auto& p = sp.p;
            MultiPoly t = MultiPoly(mixed(C[p[0]], C[p[1]], C[p[2]])) * bracket_p(A[p[3]], A[p[4]]);
            return sp.sign > 0 ? t : -t;
        },
        MultiPoly(kPositionVars));
    L_direct *= Rat(1, 12);
    for (std::size_t k = 0; k < 3; ++k) v_direct.acc[k] *= Rat(-1, 4);
    if (!(L_direct == f.L) || !(v_direct.acc == f.v_inf))
        fail(ErrorKind::consistency, "infinity forms: graded part of the bundle disagrees with the direct formulas");
    return f;
}

// ---------------------------------------------------------------- TwistMap

TwistMap::TwistMap(const Architecture& arch, const Orientation& orient)
    : arch_(arch), orient_(orient), jac_(jacobian_matrix(arch, orient)) {
    quadratic_ = twist_quadratic_bundle(arch, orient);
    for (std::size_t r = 0; r < 6; ++r) rows_[r] = twist_cofactor_row(jac_, r);
    inf_ = twist_infinity_forms(arch, orient, quadratic_);

    auto q = quadratic_.coords();
    for (std::size_t k = 0; k < 6; ++k) quad_c_[k] = CompiledPoly<double>(q[k]);
    for (std::size_t r = 0; r < 6; ++r) {
        auto c = rows_[r].coords();
        auto c3 = rows_[r].graded_part(3).coords();
        for (std::size_t k = 0; k < 6; ++k) {
            rows_c_[r][k] = CompiledPoly<double>(c[k]);
            rows3_c_[r][k] = CompiledPoly<double>(c3[k]);
        }
    }
    auto P = position_vector();
    for (std::size_t k = 0; k < 3; ++k) {
        inf_c_[k] = CompiledPoly<double>(inf_.L * P[k]);
        inf_c_[3 + k] = CompiledPoly<double>(inf_.v_inf[k]);
    }
}

namespace {

template <class T>
std::array<T, kVarCount> point_of(const Vec3<T>& P) {
    return position_point<T>(P[0], P[1], P[2]);
}

template <class T>
double norm6(const std::array<T, 6>& c) {
    double s = 0;
    for (const auto& x : c) s += std::norm(x);
    return std::sqrt(s);
}

template <class T>
std::array<T, 6> eval_bundle(const std::array<CompiledPoly<double>, 6>& polys, const Vec3<T>& P, double* scale) {
    auto pt = point_of(P);
    std::array<T, 6> out;
    double s = 0;
    for (std::size_t k = 0; k < 6; ++k) {
        out[k] = polys[k](pt);
        s += polys[k].magnitude(pt);
    }
    if (scale) *scale = s;
    return out;
}

template <class T>
double reciprocity_residual(const Twist<T>& t, const std::array<Screw<T>, 6>& screws) {
    double worst = 0;
    for (const auto& s : screws) {
        double mag = 1 + norm(s.direction) * norm(t.v) + norm(s.moment) * norm(t.omega);
        worst = std::max(worst, std::abs(reciprocal_product(t, s)) / mag);
    }
    return worst;
}

}  // namespace

template <class T>
std::array<T, 6> TwistMap::eval_quadratic(const Vec3<T>& P, double* scale) const {
    return eval_bundle(quad_c_, P, scale);
}

template <class T>
std::array<T, 6> TwistMap::eval_row(std::size_t row, const Vec3<T>& P, double* scale) const {
    return eval_bundle(rows_c_.at(row), P, scale);
}

template <class T>
RecResult<T> TwistMap::rec(const Vec3<T>& P, double tol) const {
    RecResult<T> res;
    double scale = 0;
    auto c = eval_quadratic(P, &scale);
    res.relative_norm = norm6(c) / (scale > 0 ? scale : 1);
    if (!(res.relative_norm > tol)) {
        double best = -1;
        std::array<T, 6> best_c{};
        for (std::size_t r = 0; r < 6; ++r) {
            double s = 0;
            auto rc = eval_row(r, P, &s);
            double n = norm6(rc);
            if (n > best) {
                best = n;
                best_c = rc;
                res.row = static_cast<int>(r);
                res.relative_norm = n / (s > 0 ? s : 1);
            }
        }
        if (!(res.relative_norm > tol)) fail(ErrorKind::domain, "rank < 5 at P: every twist formula vanishes");
        res.used_fallback = true;
        c = best_c;
    }
    res.twist = Twist<T>::from_coords(normalize_twist_coords(c));
    res.max_residual = reciprocity_residual(res.twist, limb_screws(arch_, orient_, P));
    return res;
}

RecResult<double> TwistMap::rec_infinity(const Vec3d& P, double tol) const {
    RecResult<double> res;
    double scale = 0;
    auto c = eval_bundle(inf_c_, P, &scale);
    res.relative_norm = norm6(c) / (scale > 0 ? scale : 1);
    if (!(res.relative_norm > tol)) {
        double best = -1;
        for (std::size_t r = 0; r < 6; ++r) {
            double s = 0;
            auto rc = eval_bundle(rows3_c_[r], P, &s);
            double n = norm6(rc);
            if (n > best) {
                best = n;
                c = rc;
                res.row = static_cast<int>(r);
                res.relative_norm = n / (s > 0 ? s : 1);
            }
        }
        if (!(res.relative_norm > tol)) fail(ErrorKind::domain, "extension undefined here: all formulas vanish");
        res.used_fallback = true;
    }
    res.twist = Twist<double>::from_coords(normalize_twist_coords(c));
    res.max_residual = std::abs(dot(res.twist.omega, res.twist.v));
    return res;
}

std::optional<std::array<Rat, 6>> TwistMap::rec_exact(const Vec3Q& P) const {
    auto pt = position_point<Rat>(P[0], P[1], P[2]);
    auto eval = [&](const TwistPolys& t) {
        std::array<Rat, 6> out;
        bool nonzero = false;
        auto c = t.coords();
        for (std::size_t k = 0; k < 6; ++k) {
            out[k] = c[k].evaluate(pt);
            nonzero = nonzero || out[k] != 0;
        }
        return nonzero ? std::optional(out) : std::nullopt;
    };
    if (auto t = eval(quadratic_)) return t;
    for (const auto& row : rows_)
        if (auto t = eval(row)) return t;
    return std::nullopt;
}

template RecResult<double> TwistMap::rec(const Vec3d&, double) const;
template RecResult<cplx> TwistMap::rec(const Vec3c&, double) const;
template std::array<double, 6> TwistMap::eval_quadratic(const Vec3d&, double*) const;
template std::array<cplx, 6> TwistMap::eval_quadratic(const Vec3c&, double*) const;
template std::array<double, 6> TwistMap::eval_row(std::size_t, const Vec3d&, double*) const;
template std::array<cplx, 6> TwistMap::eval_row(std::size_t, const Vec3c&, double*) const;

}  // namespace gsing
