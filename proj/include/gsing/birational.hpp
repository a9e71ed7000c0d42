#pragma once

// Pos: Q -> Sigma through the Cramer system, round trips with Rec, and the
// rational parametrization of the singular positions (per orientation and
// over SE(3) through the Cayley chart).

#include <map>
#include <memory>
#include <mutex>

#include "gsing/quadric.hpp"

namespace gsing {

/// Everything that depends on one orientation, built once.
struct OrientationPipeline {
    Architecture arch;
    Orientation orient;
    CubicSurface surface;
    std::shared_ptr<const TwistMap> map;
    QuadricModel quadric;
    std::shared_ptr<const QuadricParametrization> param;  ///< null if Q cannot be parametrized
    std::string param_error;

    static std::shared_ptr<const OrientationPipeline> build(const Architecture& arch, const Orientation& orient);
};

/// Homogeneous Cramer solution (w : x : y : z) of
///   V . P = 0,  (W x A_i) . P = -V . C_i - [W, A_i, C_i]  for i in the
/// first two basis joints, with w = [V, W x A_i, W x A_j].
std::array<Rat, 4> pos_homogeneous(const OrientationPipeline& pl, const TwistQ& twist);
std::array<double, 4> pos_homogeneous(const OrientationPipeline& pl, const std::array<double, 6>& twist);

/// Throws ErrorKind::domain "twist not on Q" when a membership residual is
/// nonzero (exact) and "indeterminacy point of Pos" when w = 0.
Vec3Q pos(const OrientationPipeline& pl, const TwistQ& twist);

struct PosResult {
    Vec3d P;
    double relative_det = 0;  ///< |w| / (|V| |W x A_i| |W x A_j|)
};
/// Throws ErrorKind::domain when the membership residual exceeds tol or the
/// relative Cramer determinant is at most tol.
PosResult pos(const OrientationPipeline& pl, const std::array<double, 6>& twist, double tol);

/// |w| relative to the Hadamard bound of the Cramer matrix; 0 at
/// indeterminacy points of Pos.
double cramer_relative_det(const OrientationPipeline& pl, const std::array<double, 6>& twist);
double cramer_relative_det(const OrientationPipeline& pl, const std::array<std::complex<double>, 6>& twist);

struct RoundTripReport {
    std::size_t samples_surface = 0, samples_quadric = 0;
    double max_pos_rec = 0;      ///< max |Pos(Rec(P)) - P| / (1 + |P|)
    double max_pos_rec_abs = 0;  ///< max |Pos(Rec(P)) - P|
    double max_rec_pos = 0;      ///< max projective distance between t and Rec(Pos(t))
    bool exact_origin = false;   ///< Pos(Rec(0)) == 0 in rational arithmetic
    std::size_t skipped = 0;     ///< samples landing on indeterminacy loci
};
RoundTripReport rec_pos_roundtrip_report(const OrientationPipeline& pl, std::size_t n, std::uint64_t seed,
                                         double tol = 1e-9);

/// (s, t) -> P as three rational functions with a common denominator.
class SingularityParametrization {
public:
    explicit SingularityParametrization(std::shared_ptr<const OrientationPipeline> pl);

    /// nullopt where the quadric chart or Pos is undefined.
    std::optional<Vec3Q> evaluate(const Rat& s, const Rat& t) const;
    std::optional<Vec3d> evaluate(double s, double t) const;
    /// Numerators (x, y, z) and denominator w in (s, t), unreduced.
    const std::array<MultiPoly, 4>& rational_functions() const;
    const OrientationPipeline& pipeline() const { return *pl_; }

private:
    std::shared_ptr<const OrientationPipeline> pl_;
    mutable std::once_flag fns_once_;
    mutable std::array<MultiPoly, 4> fns_;
};

struct SingularPose {
    Orientation orient;
    Vec3Q P;
};

/// (p, q, r, s, t) -> (R, P) with per-orientation pipelines cached.
class Se3Parametrization {
public:
    explicit Se3Parametrization(const Architecture& arch) : arch_(arch) {}

    std::optional<SingularPose> evaluate(const Rat& p, const Rat& q, const Rat& r, const Rat& s, const Rat& t);
    std::shared_ptr<const OrientationPipeline> pipeline(const Rat& p, const Rat& q, const Rat& r);
    std::size_t cached() const;

private:
    Architecture arch_;
    mutable std::mutex mu_;
    std::map<std::array<std::string, 3>, std::shared_ptr<const OrientationPipeline>> cache_;
};

/// det(Jac)(R, P) evaluated exactly.
Rat singularity_residual_exact(const Architecture& arch, const Orientation& orient, const Vec3Q& P);

}  // namespace gsing
