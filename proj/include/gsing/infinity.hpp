#pragma once

// The plane at infinity: the cubic curve H3 = 0, the twist forms there, the
// indetermination points of the quadratic formulas and the cubic fallback.

#include <string>
#include <vector>

#include "gsing/birational.hpp"

namespace gsing {

struct IndeterminationPoint {
    std::array<cplx, 3> direction;  ///< largest component scaled to 1
    double h3_residual = 0;          ///< |H3| / magnitude
    double v_inf_norm = 0;           ///< |V_inf| / magnitude
    double fallback_norm = 0;        ///< |cubic fallback| / magnitude
    bool real = false;
};

struct InfinityModel {
    MultiPoly H3, L;
    Vec3<MultiPoly> v_inf;
    std::size_t fallback_row = 5;   ///< cofactor row of the cubic fallback (0-based, last row)
    MultiPoly fallback_factor;      ///< Omega part of the fallback = fallback_factor * P
    Vec3<MultiPoly> fallback_v;     ///< V part of the fallback (cubics)
    /// Points of {L = 0} on H3 = 0, and those among them where V_inf vanishes.
    std::vector<IndeterminationPoint> line_points;
    std::vector<IndeterminationPoint> indetermination;
    std::vector<std::string> flags;
};

/// Common zeros of H3, L and V_inf lie on the line L = 0, so they are found
/// among the (at most three) roots of H3 restricted to that line; V_inf and
/// the fallback are then evaluated there.
InfinityModel infinity_model(const OrientationPipeline& pl, double tol = 1e-8);

/// Max over `points` of the smallest projective distance to any of `targets`.
double match_directions(const std::vector<std::array<cplx, 3>>& points,
                        const std::vector<std::array<cplx, 3>>& targets);

struct SelfReciprocityReport {
    std::size_t samples = 0;
    std::size_t failures = 0;
    double max_self_reciprocity = 0;  ///< |Omega . V| of the normalized twist
    double max_axis_deviation = 0;    ///< |Omega x P| / (|Omega| |P|) where Omega != 0
    double max_vp = 0;                ///< |V_inf(P) . P| / magnitude, V_inf . P = 0 mod H3
    double max_quadric = 0;           ///< quadric membership of the twists at infinity
    std::size_t fallback_used = 0;
    std::size_t translations_checked = 0;  ///< points with L = 0, V_inf != 0
    double max_translation_residual = 0;   ///< max of |Omega| and |V . P| / |V||P| there
    std::size_t indetermination_checked = 0;
    double max_indetermination_self_reciprocity = 0;
};

/// Samples n real points of H3 = 0 by slicing with random lines.
SelfReciprocityReport self_reciprocity_sweep(const OrientationPipeline& pl, const InfinityModel& model, std::size_t n,
                                             std::uint64_t seed, double tol = 1e-8);

}  // namespace gsing
