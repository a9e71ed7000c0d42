#pragma once

// The 27 lines of the projective cubic surface, their incidence graph, the
// rational orbits S2 / S5, the five exceptional points on Q, and the
// blow-up verification report.

#include <optional>
#include <string>
#include <vector>

#include "gsing/infinity.hpp"

namespace gsing {

/// x = t (chart x), y = t (chart y), z = t (chart z), or the plane w = 0.
enum class LineChart : std::uint8_t { x = 0, y = 1, z = 2, infinity = 3 };
std::string_view chart_name(LineChart c);

using Plucker = std::array<cplx, 6>;  ///< (direction | moment about the origin)

struct Line3 {
    Plucker plucker{};                        ///< largest component scaled to 1
    std::optional<std::array<cplx, 4>> chart;  ///< (a, b, c, d): x = t, y = a + b t, z = c + d t
    std::optional<HpC> d_hp;                   ///< chart d at working precision
    bool real = false;
    double imag = 0;              ///< max |Im| of the normalized Plücker vector
    double residual = 0;          ///< max |F| / magnitude at sampled points
    double plucker_identity = 0;  ///< |d . m| / (|d| |m|)
    LineChart found_in = LineChart::x;
    bool from_completion = false;

    bool at_infinity() const;
    /// A point of the line (affine lines only) and a unit direction.
    std::array<cplx, 3> point() const;
    std::array<cplx, 3> direction() const;
};

struct LineSearchOptions {
    std::uint64_t seed = 1;
    std::size_t restarts = 2000;  ///< per chart
    double dedup_tol = 1e-6;
    double real_tol = 1e-8;
    double residual_tol = 1e-8;
    bool extended_precision = true;  ///< polish in 100-digit floats (double otherwise)
    bool complete = true;        ///< tritangent-plane completion when fewer than 27 are found
};

struct LineSearchResult {
    std::vector<Line3> lines;
    std::size_t real_count = 0, complex_count = 0;
    std::array<std::size_t, 4> per_chart{};  ///< distinct lines reached from each chart
    std::size_t completed = 0;               ///< lines added by tritangent completion
    double max_residual = 0;
    double max_plucker_identity = 0;
    std::vector<std::string> warnings;
    std::uint64_t seed = 0;
    std::size_t restarts = 0;
    bool extended_precision = true;
};

/// Lines on the projective closure of the affine cubic F(x, y, z) = 0.
LineSearchResult find_lines(const MultiPoly& F, const LineSearchOptions& opts = {});

/// d1 . m2 + d2 . m1 after scaling each vector to unit norm.
cplx line_reciprocal_product(const Plucker& a, const Plucker& b);
/// (a - a')(d - d') - (b - b')(c - c') for two lines of the x = t chart.
cplx chart_coplanarity(const std::array<cplx, 4>& l1, const std::array<cplx, 4>& l2);
/// Plücker coordinates of the chart line x = t, y = a + b t, z = c + d t.
Plucker chart_plucker(const std::array<cplx, 4>& abcd);

using Incidence = std::vector<std::vector<bool>>;
/// Coplanarity through the reciprocal product; symmetric with false diagonal.
Incidence incidence(const std::vector<Line3>& lines, double tol = 1e-6);

struct OrbitOptions {
    double tol = 1e-85;  ///< relative agreement required from a convergent
    double imag_tol = 1e-70;
    BigInt max_den = BigInt("1" + std::string(40, '0'));  ///< bound on the common denominator
};

struct OrbitPolynomial {
    std::vector<std::size_t> members;
    std::vector<double> monic;  ///< prod (d - d_i), low to high, real parts
    double max_imag = 0;
    bool rational = false;
    std::vector<BigInt> integer;  ///< primitive integer multiple, low to high, positive leading
    BigInt height = 0;            ///< max |integer coefficient|
    double match = 0;             ///< max |coefficient - rationalized coefficient|
    std::string reason;           ///< why rationalization failed
};

/// prod (d - d_i) over the chart-x d coefficients of the subset, and its
/// coefficientwise continued-fraction rationalization.
OrbitPolynomial orbit_polynomial(const std::vector<Line3>& lines, const std::vector<std::size_t>& subset,
                                 const OrbitOptions& opts = {});
/// Same product at working precision, monic, low to high.
std::vector<HpC> orbit_product(const std::vector<Line3>& lines, const std::vector<std::size_t>& subset);

struct LineClassification {
    bool found = false;
    std::string reason;
    Incidence inc;
    std::vector<std::size_t> row_sums;
    std::size_t candidates = 0;  ///< skew pairs with exactly five common transversals
    std::array<std::size_t, 2> s2{};
    std::vector<std::size_t> s5, t10_one, t10_none;
    OrbitPolynomial s2_poly, s5_poly, t10_one_poly, t10_none_poly;
    bool s2_skew = false, s5_meet_both = false, s5_mutually_skew = false, partition_ok = false;
};

/// Picks the skew pair with five common transversals whose orbit
/// polynomials rationalize with the smallest height.
LineClassification classify(const std::vector<Line3>& lines, const Incidence& inc, const OrbitOptions& opts = {});

struct ExceptionalPoint {
    std::size_t line = 0;
    std::array<cplx, 6> twist{};  ///< normalized (o1..v3)
    bool real = false;
    double spread = 0;            ///< max projective distance between twists along the line
    double membership = 0;        ///< quadric membership, relative
    double self_reciprocity = 0;  ///< |Omega . V|
    double omega_norm = 0;
    double axis_residual = 0;     ///< max over limbs and samples of the axis-limb reciprocal product
    double cramer = 0;            ///< relative Cramer determinant of Pos
};

struct ExceptionalReport {
    std::vector<ExceptionalPoint> points;
    double min_pairwise_distance = 0;
    std::vector<std::string> findings;
};

ExceptionalReport exceptional_points(const OrientationPipeline& pl, const std::vector<Line3>& lines,
                                     const LineClassification& cls, double tol = 1e-8);

struct BlowupOptions {
    LineSearchOptions search;
    OrbitOptions orbit;
    double tol = 1e-8;
    std::size_t infinity_samples = 100;
};

struct BlowupReport {
    std::size_t surface_degree = 0;
    LineSearchResult search;
    LineClassification cls;
    ExceptionalReport exceptional;
    double product_match = -1;      ///< prod over 27 lines vs product of the four orbit polynomials
    double bundle_max_on_s2 = -1;   ///< quadratic bundle, relative, along the S2 lines
    double bundle_min_off_s2 = -1;  ///< min over the other lines of the largest sampled value
    double fallback_min_on_s2 = -1; ///< cubic fallback row, min at candidate zeros on the S2 lines
    bool has_infinity = false;
    InfinityModel infinity;
    SelfReciprocityReport sweep;
    double indetermination_match = -1;  ///< indetermination points vs S2 directions
    std::vector<std::string> findings;
    bool ok() const { return findings.empty(); }
};

BlowupReport blowup_report(const OrientationPipeline& pl, const BlowupOptions& opts = {});

}  // namespace gsing
