#include <Eigen/Dense>

#include "doctest.h"
#include "gsing/twistmap.hpp"
#include "support.hpp"

using namespace gsing;
using fixture::poly;

namespace {

const TwistMap& case_map() { return *fixture::case_pipeline()->map; }

// Right singular vector of the smallest singular value, reordered from the
// Jacobian column order (V | Omega) to (Omega | V).
std::array<double, 6> svd_null_twist(const Vec3d& P) {
    const auto& cs = fixture::case_study();
    auto J = numeric_jacobian(cs.arch, cs.orient, P);
    Eigen::Matrix<double, 6, 6> M;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) M(i, j) = J[i][j];
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(M, Eigen::ComputeFullV);
    auto z = svd.matrixV().col(5);
    return {z(3), z(4), z(5), z(0), z(1), z(2)};
}

std::array<double, 6> eval(const TwistPolys& t, const Vec3d& P) {
    std::array<double, 6> out;
    auto c = t.coords();
    for (std::size_t i = 0; i < 6; ++i) out[i] = c[i].evaluate(position_point(P[0], P[1], P[2]));
    return out;
}

double max_reciprocity(const std::array<double, 6>& t, const Vec3d& P) {
    const auto& cs = fixture::case_study();
    auto tw = Twist<double>::from_coords(normalize_twist_coords(t));
    double worst = 0;
    for (const auto& s : limb_screws(cs.arch, cs.orient, P)) {
        double scale = norm(s.direction) * norm(tw.v) + norm(s.moment) * norm(tw.omega);
        worst = std::max(worst, std::abs(reciprocal_product(tw, s)) / scale);
    }
    return worst;
}

std::vector<Vec3d> surface_points(std::size_t n, std::uint64_t seed) {
    return sample_surface_points(fixture::case_pipeline()->surface, n, seed, 10);
}

std::array<MultiPoly, 6> parse6(const std::array<const char*, 6>& s) {
    std::array<MultiPoly, 6> out;
    for (std::size_t i = 0; i < 6; ++i) out[i] = poly(s[i]);
    return out;
}

}  // namespace

TEST_CASE("cofactor rows lie in the numerical nullspace") {
    const auto& map = case_map();
    for (const auto& P : surface_points(10, 1)) {
        auto null = svd_null_twist(P);
        for (std::size_t r = 0; r < 6; ++r) {
            auto row = eval(map.cofactor_row(r), P);
            double n = 0;
            for (double x : row) n = std::max(n, std::abs(x));
            if (n < 1e-6) continue;
            CHECK(projective_distance(row, null) < 1e-8);
        }
    }
}

TEST_CASE("different cofactor rows are proportional on the surface") {
    const auto& map = case_map();
    for (const auto& P : surface_points(20, 2)) {
        auto a = eval(map.cofactor_row(1), P), b = eval(map.cofactor_row(4), P);
        CHECK(projective_distance(a, b) < 1e-8);
    }
}

TEST_CASE("off the surface a cofactor row is not reciprocal") {
    const auto& map = case_map();
    Vec3d P{1.5, -2.25, 0.75};
    REQUIRE_FALSE(is_singular(fixture::case_pipeline()->surface, P, 1e-8).singular);
    CHECK(max_reciprocity(eval(map.cofactor_row(5), P), P) > 1e-3);
}

TEST_CASE("quadratic bundle matches the published twist formulas") {
    const auto& map = case_map();
    CHECK(map.quadratic().degree() <= 2);
    CHECK(fixture::proportional(map.quadratic().coords(), parse6(fixture::kTwistFormulas)));
}

TEST_CASE("cofactor column sums cancel down to degree two") {
    const auto& map = case_map();
    auto sums = twist_column_sums(map.jacobian());
    CHECK(sums.degree() <= 2);
    CHECK(fixture::proportional(sums.coords(), map.quadratic().coords()));
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        auto spec = random_platform_spec(seed);
        TwistMap m(spec.arch, spec.orient);
        auto s = twist_column_sums(m.jacobian());
        CHECK(s.degree() <= 2);
        CHECK(fixture::proportional(s.coords(), m.quadratic().coords()));
    }
    for (std::size_t r = 0; r < 6; ++r) CHECK(map.cofactor_row(r).degree() <= 3);
}

TEST_CASE("quadratic bundle is parallel to the cofactor rows") {
    const auto& map = case_map();
    for (const auto& P : surface_points(20, 3)) {
        auto q = eval(map.quadratic(), P), r = eval(map.cofactor_row(5), P);
        CHECK(projective_distance(q, r) < 1e-8);
    }
}

TEST_CASE("twist forms at infinity") {
    const auto& map = case_map();
    const auto& inf = map.infinity();
    CHECK(fixture::proportional(inf.L, poly(fixture::kL)));
    auto x = poly("x"), y = poly("y"), z = poly("z"), L = poly(fixture::kL);
    std::array<MultiPoly, 6> published{L * x, L * y, L * z, poly(fixture::kVInfinity[0]), poly(fixture::kVInfinity[1]),
                                       poly(fixture::kVInfinity[2])};
    std::array<MultiPoly, 6> ours{inf.omega_inf[0], inf.omega_inf[1], inf.omega_inf[2],
                                  inf.v_inf[0],     inf.v_inf[1],     inf.v_inf[2]};
    CHECK(fixture::proportional(ours, published));
    auto top = map.quadratic().graded_part(2);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(top.omega[k] == inf.omega_inf[k]);
        CHECK(top.v[k] == inf.v_inf[k]);
        CHECK(inf.omega_inf[k] == inf.L * position_vector()[k]);
    }
}

TEST_CASE("factoring out the position vector") {
    auto g = poly("2x-y+3");
    Vec3<MultiPoly> f{g * poly("x"), g * poly("y"), g * poly("z")};
    auto got = factor_position(f);
    REQUIRE(got.has_value());
    CHECK(*got == g);
    Vec3<MultiPoly> bad{poly("x^2"), poly("y^2"), poly("x*z")};
    CHECK_FALSE(factor_position(bad).has_value());
}

TEST_CASE("reciprocal twist at the origin") {
    const auto& map = case_map();
    auto r = map.rec(Vec3d{0, 0, 0}, 1e-8);
    CHECK_FALSE(r.used_fallback);
    std::array<double, 6> want;
    for (std::size_t i = 0; i < 6; ++i) want[i] = fixture::kTwistAtOrigin[i];
    CHECK(projective_distance(r.twist.coords(), want) < 1e-14);
    auto exact = map.rec_exact(Vec3Q{});
    REQUIRE(exact.has_value());
    Rat c = (*exact)[0] / fixture::kTwistAtOrigin[0];
    for (std::size_t i = 0; i < 6; ++i) CHECK((*exact)[i] == c * fixture::kTwistAtOrigin[i]);
}

TEST_CASE("reciprocity residuals on the surface") {
    const auto& map = case_map();
    double worst = 0, worst_independent = 0;
    for (const auto& P : surface_points(100, 4)) {
        auto r = map.rec(P, 1e-8);
        worst = std::max(worst, r.max_residual);
        worst_independent = std::max(worst_independent, max_reciprocity(r.twist.coords(), P));
    }
    CHECK(worst <= 1e-8);
    CHECK(worst_independent <= 1e-8);
}

TEST_CASE("cubic fallback at infinity matches the published forms") {
    const auto& map = case_map();
    auto top = map.cofactor_row(5).graded_part(3);
    auto g = poly(fixture::kFallbackFactor);
    std::array<MultiPoly, 6> published{g * poly("x"), g * poly("y"), g * poly("z"), poly(fixture::kFallbackV[0]),
                                       poly(fixture::kFallbackV[1]), poly(fixture::kFallbackV[2])};
    CHECK(fixture::proportional(top.coords(), published));
}

TEST_CASE("twists at infinity are self-reciprocal") {
    const auto& map = case_map();
    const auto& H3 = fixture::case_pipeline()->surface.H3;
    Rng rng(41, 1);
    std::size_t checked = 0, rotations = 0;
    while (checked < 50) {
        // points of H3 = 0 in the chart x = 1: fix y, solve the cubic in z
        double y = rng.uniform(-3, 3);
        auto h = H3.substitute(Var::x, Rat(1)).substitute(Var::y, rat_from_double(y));
        std::vector<double> c(4, 0.0);
        for (const auto& [m, coef] : h.terms()) c[m[Var::z]] += to_double(coef);
        for (double z : real_roots(c)) {
            Vec3d P{1, y, z};
            auto r = map.rec_infinity(P, 1e-8);
            CHECK(r.max_residual <= 1e-8);
            double l = map.infinity().L.evaluate(position_point(P[0], P[1], P[2]));
            if (std::abs(l) > 1e-3 && !r.used_fallback) {
                auto w = r.twist.omega;
                CHECK(norm(cross(w, P)) <= 1e-8 * norm(w) * norm(P));
                ++rotations;
            }
            ++checked;
        }
    }
    CHECK(rotations > 0);
}
