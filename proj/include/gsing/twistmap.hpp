#pragma once

// The reciprocal-twist map Rec from the singularity surface to the space of
// twists, as cofactor rows (degree 3), cofactor column sums (degree 2), and
// their homogeneous parts at infinity.
//
// Column/twist pairing: a row of Jac is (F | M) and the reciprocal product
// with a twist (Omega | V) is F.V + Omega.M, so a nullspace vector of Jac
// carries V in its first three coordinates and Omega in the last three.
// Reports list twists in the order (o1, o2, o3, v1, v2, v3).

#include <array>
#include <complex>
#include <optional>

#include "gsing/singularity.hpp"

namespace gsing {

template <class T>
struct Twist {
    Vec3<T> omega;
    Vec3<T> v;

    std::array<T, 6> coords() const { return {omega[0], omega[1], omega[2], v[0], v[1], v[2]}; }
    static Twist from_coords(const std::array<T, 6>& c) { return {{c[0], c[1], c[2]}, {c[3], c[4], c[5]}}; }
};

template <class T>
T reciprocal_product(const Twist<T>& t, const Screw<T>& s) {
    return T(dot(s.direction, t.v) + dot(t.omega, s.moment));
}

/// Six polynomial components of a twist, ordered (Omega | V).
struct TwistPolys {
    Vec3<MultiPoly> omega, v;

    std::array<MultiPoly, 6> coords() const { return {omega[0], omega[1], omega[2], v[0], v[1], v[2]}; }
    TwistPolys graded_part(unsigned k) const;
    int degree() const;
    bool is_zero() const;
};

/// cof(Jac)_{row, 1..6} mapped to (Omega | V). row is 0-based.
TwistPolys twist_cofactor_row(const PolyMatrix& jac, std::size_t row);

/// Column sums of the cofactor matrix, sum_i cof(Jac)_{i, j}, as (T2 | T1).
/// This is the cofactor route to the quadratic bundle.
TwistPolys twist_column_sums(const PolyMatrix& jac);

/// The quadratic bundle (T2 | T1) from the permutation sums
///   T1 = 1/12 sum eps (C_s2+P) x (C_s3+P) [A_s4 x (C_s4+P), A_s5 x (C_s5+P), A_s6 x (C_s6+P)]
///   T2 = 1/12 sum eps [C_s1+P, C_s2+P, C_s3+P] (A_s4 x (C_s4+P)) x (A_s5 x (C_s5+P)).
/// Throws ErrorKind::consistency unless every component has degree <= 2.
TwistPolys twist_quadratic_bundle(const Architecture& arch, const Orientation& orient);

struct InfinityForms {
    Vec3<MultiPoly> v_inf;      ///< degree-2 part of T1
    Vec3<MultiPoly> omega_inf;  ///< degree-2 part of T2
    MultiPoly L;                ///< omega_inf = L(P) * P
};

/// Degree-2 parts of the quadratic bundle with the exact factorization of
/// the angular part; cross-checked against the direct permutation formulas
///   V_inf = -1/4 sum eps [A_s1, A_s2, P][A_s3, C_s3, P] C_s4 x C_s5
///   L     = 1/12 sum eps [C_s1, C_s2, C_s3][A_s4, A_s5, P].
/// Throws ErrorKind::consistency if the factorization or the cross-check fails.
InfinityForms twist_infinity_forms(const Architecture& arch, const Orientation& orient, const TwistPolys& quadratic);

/// f = g * (x, y, z) componentwise, for some polynomial g; nullopt otherwise.
std::optional<MultiPoly> factor_position(const Vec3<MultiPoly>& f);

template <class T>
struct RecResult {
    Twist<T> twist;              ///< normalized: largest-magnitude component is 1
    bool used_fallback = false;  ///< a cofactor row was used instead of the quadratic bundle
    int row = -1;                ///< cofactor row (0-based) when used_fallback
    double relative_norm = 0;    ///< norm of the formula used, relative to its scale
    double max_residual = 0;     ///< reciprocity (or self-reciprocity at infinity) residual
};

/// All formula bundles for one architecture and orientation, compiled for
/// repeated numeric evaluation. Immutable after construction.
class TwistMap {
public:
    TwistMap(const Architecture& arch, const Orientation& orient);

    const PolyMatrix& jacobian() const { return jac_; }
    const TwistPolys& quadratic() const { return quadratic_; }
    const TwistPolys& cofactor_row(std::size_t row) const { return rows_.at(row); }
    const InfinityForms& infinity() const { return inf_; }

    /// Reciprocal twist at a point of the surface. Uses the quadratic
    /// bundle unless it is below `tol` relative to its scale, then the cofactor
    /// row of largest norm. Throws ErrorKind::domain if everything vanishes.
    template <class T>
    RecResult<T> rec(const Vec3<T>& P, double tol) const;

    /// Reciprocal twist at the point at infinity in direction P (on H3 = 0),
    /// from (Omega_inf | V_inf), falling back to the degree-3 parts of the
    /// cofactor rows. The residual reported is |Omega . V| after normalization.
    RecResult<double> rec_infinity(const Vec3d& P, double tol) const;

    /// Exact, unnormalized twist at a rational point: the quadratic bundle,
    /// or the first nonzero cofactor row. nullopt when everything vanishes.
    std::optional<std::array<Rat, 6>> rec_exact(const Vec3Q& P) const;

    /// Raw bundle values at P (unnormalized) and their scale.
    template <class T>
    std::array<T, 6> eval_quadratic(const Vec3<T>& P, double* scale = nullptr) const;
    template <class T>
    std::array<T, 6> eval_row(std::size_t row, const Vec3<T>& P, double* scale = nullptr) const;

private:
    Architecture arch_;
    Orientation orient_;
    PolyMatrix jac_;
    TwistPolys quadratic_;
    std::array<TwistPolys, 6> rows_;
    InfinityForms inf_;
    std::array<CompiledPoly<double>, 6> quad_c_;
    std::array<std::array<CompiledPoly<double>, 6>, 6> rows_c_;
    std::array<std::array<CompiledPoly<double>, 6>, 6> rows3_c_;
    std::array<CompiledPoly<double>, 6> inf_c_;
};

/// Largest-magnitude component scaled to 1.
template <class T>
std::array<T, 6> normalize_twist_coords(std::array<T, 6> c) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < 6; ++i)
        if (std::abs(c[i]) > std::abs(c[best])) best = i;
    T pivot = c[best];
    for (auto& x : c) x /= pivot;
    return c;
}

/// ||a wedge b|| / (||a|| ||b||): zero iff a and b are proportional.
template <class T>
double projective_distance(const std::array<T, 6>& a, const std::array<T, 6>& b) {
    double na = 0, nb = 0, w = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
        for (std::size_t j = i + 1; j < 6; ++j) w += std::norm(a[i] * b[j] - a[j] * b[i]);
    }
    if (na == 0 || nb == 0) return 1;
    return std::sqrt(w / (na * nb));
}

}  // namespace gsing
