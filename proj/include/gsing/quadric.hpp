#pragma once

// The quadric Q of reciprocal twists: two linear forms and one quadratic
// form in the twist coordinates (o1, o2, o3, v1, v2, v3), plus a rational
// parametrization of Q by projection from the point Rec(0).

#include <array>
#include <optional>

#include "gsing/twistmap.hpp"

namespace gsing {

using TwistQ = std::array<Rat, 6>;

/// The two base joints outside the chosen basis triple, written in that basis.
struct DependencyCoefficients {
    std::array<std::size_t, 3> basis{};   ///< 0-based indices into arch.base, each in 1..5
    std::array<std::size_t, 2> others{};  ///< the remaining two indices, ascending
    std::array<Rat, 3> alpha, beta;       ///< A_others[0] = sum alpha_k A_basis[k]; beta likewise
    Rat mixed;                            ///< [A_basis0, A_basis1, A_basis2]
};

/// Picks the triple among A_2..A_6 with the largest |mixed product| (ties:
/// lexicographically first), unless `forced` names one. Throws
/// ErrorKind::degenerate when rank{A_2..A_6} < 3 and ErrorKind::domain when
/// a forced triple is dependent.
DependencyCoefficients dependency_coefficients(const Architecture& arch,
                                               std::optional<std::array<std::size_t, 3>> forced = std::nullopt);

/// l_a (W x A_a) + l_b (W x A_b) + l_c (W x A_c) with l_a = [W, A_b, A_c] and
/// cyclic. Zero for every W and every triple.
Vec3Q ell_identity_check(const Vec3Q& omega, const std::array<Vec3Q, 3>& triple);

struct QuadricModel {
    DependencyCoefficients dep;
    TwistQ lin1, lin2;  ///< linear forms, coefficients on (o1..v3), projectively normalized
    QMatrix quad;       ///< symmetric 6x6, t^T quad t is the quadratic form
    MultiPoly lin1_poly, lin2_poly, quad_poly;
    TwistQ base_point;  ///< Rec(0), exact and unnormalized
    bool generic = true;  ///< false if a form vanished identically
};

/// Builds Q from the reciprocity equations of limbs 1..6 with the limb-1
/// equation V.P = 0 used to eliminate P.
QuadricModel quadric_equations(const Architecture& arch, const Orientation& orient, const TwistMap& map,
                               std::optional<std::array<std::size_t, 3>> forced = std::nullopt);

/// Coefficient vector of a linear form, and symmetric matrix of a quadratic
/// form, in the twist variables.
TwistQ linear_form_coeffs(const MultiPoly& f);
QMatrix quadratic_form_matrix(const MultiPoly& f);
MultiPoly linear_form_poly(const TwistQ& c);
MultiPoly quadratic_form_poly(const QMatrix& m);

/// True when span{a1, a2} = span{b1, b2} and both have rank 2.
bool same_linear_span(const std::array<TwistQ, 2>& a, const std::array<TwistQ, 2>& b);
/// True when the quadratic forms restricted to the common 4-space
/// lin = 0 are proportional (nonzero factor).
bool same_quadric_modulo_span(const std::array<TwistQ, 2>& lin, const QMatrix& qa, const QMatrix& qb);
/// Both tests above.
bool same_quadric(const QuadricModel& a, const QuadricModel& b);

struct MembershipResidual {
    std::array<double, 3> raw{};       ///< lin1(t), lin2(t), quad(t) in absolute value
    std::array<double, 3> relative{};  ///< each divided by the sum of |term| magnitudes
    double max_relative() const { return std::max({relative[0], relative[1], relative[2]}); }
};

/// Throws ErrorKind::domain for the zero twist.
template <class T>
MembershipResidual quadric_membership(const QuadricModel& model, const std::array<T, 6>& t);
std::array<Rat, 3> quadric_membership_exact(const QuadricModel& model, const TwistQ& t);

/// Stereographic projection of Q from its base point. With N a basis of the
/// 3-space {lin1 = lin2 = 0} (6x4), u0 the base point in that basis and
/// S = N^T Q N, the chart hyperplane is u_k = 0 where k is the largest
/// coordinate of u0 and the direction is d(s, t) = e_a + s e_b + t e_c over
/// the other three indices in increasing order. The second intersection of
/// the line u0 + lambda d with Q is q(d) u0 - 2 (u0^T S d) d.
class QuadricParametrization {
public:
    /// Throws ErrorKind::degenerate "Q degenerate or base point on vertex"
    /// when S u0 = 0 or the linear forms are dependent.
    explicit QuadricParametrization(const QuadricModel& model);

    const QMatrix& basis() const { return N_; }
    const std::array<Rat, 4>& base_coords() const { return u0_; }
    const QMatrix& restricted_form() const { return S_; }
    std::size_t chart_index() const { return k_; }
    std::array<std::size_t, 3> direction_indices() const { return dir_; }
    /// det S != 0: Q is a smooth quadric surface.
    bool nondegenerate() const { return S_.determinant() != 0; }

    /// Point of Q for (s, t); nullopt when the whole line lies on Q.
    std::optional<TwistQ> evaluate(const Rat& s, const Rat& t) const;
    std::array<double, 6> evaluate(double s, double t) const;
    /// The six components as polynomials of degree <= 2 in (s, t).
    std::array<MultiPoly, 6> polynomials() const;
    /// (s, t) of a twist on Q, or nullopt if it is the base point or its
    /// direction lies in the chart hyperplane at infinity (d_a = 0).
    std::optional<std::array<Rat, 2>> inverse(const TwistQ& twist) const;
    /// t such that d(s, t) is tangent to Q at the base point, if unique.
    std::optional<Rat> tangent_parameter(const Rat& s) const;

private:
    std::array<Rat, 4> direction(const Rat& s, const Rat& t) const;
    QMatrix N_, S_;
    std::array<Rat, 4> u0_;
    std::size_t k_ = 0;
    std::array<std::size_t, 3> dir_{};
    std::array<std::array<double, 4>, 6> Nd_{};
    std::array<std::array<double, 4>, 4> Sd_{};
    std::array<double, 4> u0d_{};
};

}  // namespace gsing
