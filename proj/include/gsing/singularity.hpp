#pragma once

// The cubic surface of singular positions for a fixed orientation, its
// part at infinity and the hexagon criterion for singular directions.

#include <array>
#include <cstdint>
#include <vector>

#include "gsing/numeric.hpp"
#include "gsing/platform.hpp"

namespace gsing {

/// 6x6 matrix over Q[x, y, z] whose row i is the Plücker line of limb i at
/// the symbolic position P = (x, y, z).
PolyMatrix jacobian_matrix(const Architecture& arch, const Orientation& orient);

struct CubicSurface {
    MultiPoly det;  ///< det(Jac) as computed, before normalization
    MultiPoly F;    ///< normalize_projective(det)
    MultiPoly F_h;  ///< homogenization of F with w
    MultiPoly H3;   ///< degree-3 part of F in (x, y, z)
    int degree = 0;
    bool degenerate = false;  ///< degree < 3
    Architecture arch;
    Orientation orient;
};

/// Throws ErrorKind::degenerate when det(Jac) vanishes identically.
CubicSurface cubic_surface(const Architecture& arch, const Orientation& orient);

struct InfinityCubic {
    MultiPoly graded;    ///< degree-3 part of det(Jac)
    MultiPoly b_form;    ///< -1/4 sum eps [A,A,P][A,B,P][B,B,P]
    MultiPoly c_form;    ///< same sum with C_i in place of B_i
    MultiPoly normalized;
};

/// H3 computed from the graded part and from both permutation sums.
/// Throws ErrorKind::consistency if the three disagree after normalization.
InfinityCubic infinity_cubic(const CubicSurface& surface);

using Vec2Q = std::array<Rat, 2>;

/// sum over S6 of eps(s) [a_s1, a_s2] [b_s3, b_s4] [a_s5, b_s5] with 2x2 brackets.
Rat hexagon_sum(const std::array<Vec2Q, 6>& alpha, const std::array<Vec2Q, 6>& beta);

/// Rational orthogonal (not normalized) basis of the plane orthogonal to dir,
/// from Gram-Schmidt on the two coordinate axes least aligned with dir.
std::array<Vec3Q, 2> projection_basis(const Vec3Q& dir);

/// Projects A_i and B_i = R b_i along dir into projection_basis(dir) and
/// evaluates hexagon_sum. Zero exactly when dir is a singular direction at
/// infinity. Throws ErrorKind::domain for dir = 0.
Rat hexagon_criterion(const Architecture& arch, const Orientation& orient, const Vec3Q& dir);

struct SingularTest {
    bool singular;
    double residual;  ///< |F(P)| / (1 + sum |c| |P|^deg)
};
SingularTest is_singular(const CubicSurface& surface, const Vec3d& P, double tol);

/// Real points of F = 0, sampled by intersecting random lines through a box
/// of half-width `half_width` with the surface. Deterministic in (seed, stream).
std::vector<Vec3d> sample_surface_points(const CubicSurface& surface, std::size_t n, std::uint64_t seed,
                                         double half_width, std::uint64_t stream = 0);

struct SmoothnessReport {
    std::size_t samples = 0;
    double min_gradient = 0;        ///< min over samples of |grad F| / scale
    double min_fifth_singular = 0;  ///< min over samples of sigma_5(Jac) / sigma_1(Jac)
    double max_sixth_singular = 0;  ///< max over samples of sigma_6(Jac) / sigma_1(Jac)
    std::size_t rank_five = 0;      ///< samples where Jac has numerical rank exactly 5
    bool possibly_singular = false;
};

SmoothnessReport smoothness_probe(const CubicSurface& surface, std::size_t n_samples, std::uint64_t seed,
                                  double tol = 1e-9);

/// Numeric Jacobian at a point (rows are limb Plücker lines).
std::array<std::array<double, 6>, 6> numeric_jacobian(const Architecture& arch, const Orientation& orient,
                                                      const Vec3d& P);

/// Sum over S6, in parallel chunks with a fixed-order reduction. `term`
/// receives a signed permutation and returns a value to add.
template <class T, class Fn>
T s6_sum(Fn term, T zero);

}  // namespace gsing

#include "gsing/detail/s6_sum.hpp"
