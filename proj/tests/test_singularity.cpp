#include <Eigen/Dense>

#include "doctest.h"
#include "gsing/singularity.hpp"
#include "support.hpp"

using namespace gsing;
using fixture::poly;

namespace {

double eigen_det(const Architecture& arch, const Orientation& orient, const Vec3d& P) {
    auto J = numeric_jacobian(arch, orient, P);
    Eigen::Matrix<double, 6, 6> M;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) M(i, j) = J[i][j];
    return M.determinant();
}

Rat eval3(const MultiPoly& f, const Vec3Q& d) { return f.evaluate(position_point(d[0], d[1], d[2])); }

}  // namespace

TEST_CASE("Jacobian rows") {
    const auto& cs = fixture::case_study();
    auto J = jacobian_matrix(cs.arch, cs.orient);
    CHECK(J(0, 0) == poly("x"));
    CHECK(J(0, 1) == poly("y"));
    CHECK(J(0, 2) == poly("z"));
    for (std::size_t j = 3; j < 6; ++j) CHECK(J(0, j).is_zero());
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(J(i, j).degree_in(kPositionVars) <= 1);

    Vec3d P{0.3, -1.7, 2.2};
    auto screws = limb_screws(cs.arch, cs.orient, P);
    auto pt = position_point(P[0], P[1], P[2]);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(J(i, k).evaluate(pt) == doctest::Approx(screws[i].direction[k]));
            CHECK(J(i, 3 + k).evaluate(pt) == doctest::Approx(screws[i].moment[k]));
        }
}

TEST_CASE("case-study cubic matches the published equation") {
    const auto& cs = fixture::case_study();
    auto s = cubic_surface(cs.arch, cs.orient);
    CHECK(s.degree == 3);
    CHECK_FALSE(s.degenerate);
    CHECK(fixture::proportional(s.F, poly(fixture::kCubic)));
    CHECK(fixture::proportional(s.det, poly(fixture::kCubic)));
    CHECK(s.F_h.substitute(Var::w, Rat(1)) == s.F);
    CHECK(s.H3 == s.F.graded_part(kPositionVars, 3));
}

TEST_CASE("the origin is always singular") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto spec = random_platform_spec(seed);
        auto s = cubic_surface(spec.arch, spec.orient);
        CHECK(s.F.evaluate(position_point(Rat(0), Rat(0), Rat(0))) == 0);
        CHECK(s.degree == 3);
    }
}

TEST_CASE("determinant agrees with floating Jacobians") {
    Rng rng(31, 1);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        auto spec = random_platform_spec(seed);
        auto s = cubic_surface(spec.arch, spec.orient);
        for (int k = 0; k < 5; ++k) {
            Vec3d P{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
            auto pt = position_point(P[0], P[1], P[2]);
            CHECK(s.det.evaluate(pt) == doctest::Approx(eigen_det(spec.arch, spec.orient, P)).epsilon(1e-9));
        }
    }
}

TEST_CASE("planar architecture still yields a cubic") {
    auto spec = load_platform_spec(fixture::data_path("planar.json"));
    CHECK(spec.arch.base_rank == 2);
    auto s = cubic_surface(spec.arch, spec.orient);
    CHECK(s.degree <= 3);
    CHECK(s.F.evaluate(position_point(Rat(0), Rat(0), Rat(0))) == 0);
}

TEST_CASE("infinity cubic") {
    const auto& cs = fixture::case_study();
    auto s = cubic_surface(cs.arch, cs.orient);
    auto ic = infinity_cubic(s);
    CHECK(fixture::proportional(ic.normalized, poly(fixture::kInfinityCubic)));
    CHECK(fixture::proportional(ic.graded, ic.b_form));
    CHECK(fixture::proportional(ic.graded, ic.c_form));
    CHECK(ic.b_form == ic.c_form);
}

TEST_CASE("infinity cubic against the leading coefficient of floating determinants") {
    Rng rng(32, 1);
    for (std::uint64_t seed = 11; seed <= 15; ++seed) {
        auto spec = random_platform_spec(seed);
        auto s = cubic_surface(spec.arch, spec.orient);
        auto ic = infinity_cubic(s);
        for (int k = 0; k < 4; ++k) {
            Vec3d d{rng.normal(), rng.normal(), rng.normal()};
            // det(J(l d)) is a cubic in l; its third difference on l = 1..4 is 6 c3
            std::array<double, 4> f;
            for (int l = 1; l <= 4; ++l) f[l - 1] = eigen_det(spec.arch, spec.orient, Vec3d{l * d[0], l * d[1], l * d[2]});
            double c3 = (f[3] - 3 * f[2] + 3 * f[1] - f[0]) / 6;
            double h3 = ic.graded.evaluate(position_point(d[0], d[1], d[2]));
            double scale = ic.graded.magnitude(position_point(d[0], d[1], d[2]));
            CHECK(std::abs(c3 - h3) <= 1e-9 * scale);
        }
    }
}

// With e1 x e2 = c d for the projection basis, every 2D bracket is c times
// a 3D bracket with d, so the criterion is c^3 times a fixed multiple of H3.
TEST_CASE("hexagon criterion is a multiple of H3") {
    Rng rng(33, 1);
    for (std::uint64_t seed : {0ull, 3ull, 4ull}) {
        auto spec = seed == 0 ? fixture::case_study() : random_platform_spec(seed);
        auto s = cubic_surface(spec.arch, spec.orient);
        std::optional<Rat> ratio;
        for (int k = 0; k < 20; ++k) {
            Vec3Q d{rng.rational(9, 5), rng.rational(9, 5), rng.rational(9, 5)};
            if (d == Vec3Q{}) continue;
            Rat h = eval3(s.H3, d), c = hexagon_criterion(spec.arch, spec.orient, d);
            CHECK((h == 0) == (c == 0));
            if (h == 0) continue;
            auto e = projection_basis(d);
            CHECK(dot(e[0], d) == 0);
            CHECK(dot(e[1], d) == 0);
            CHECK(dot(e[0], e[1]) == 0);
            Rat scale = mixed(e[0], e[1], d) / dot(d, d);
            Rat r = c / (h * scale * scale * scale);
            if (!ratio) ratio = r;
            CHECK(r == *ratio);
        }
        CHECK_THROWS_AS(hexagon_criterion(spec.arch, spec.orient, Vec3Q{}), Error);
    }
}

TEST_CASE("hexagon sum invariances") {
    Rng rng(34, 1);
    for (int trial = 0; trial < 10; ++trial) {
        std::array<Vec2Q, 6> a, b;
        for (std::size_t i = 0; i < 6; ++i) {
            a[i] = {rng.rational(9, 4), rng.rational(9, 4)};
            b[i] = {rng.rational(9, 4), rng.rational(9, 4)};
        }
        Rat base = hexagon_sum(a, b);
        Vec2Q u{rng.rational(9, 4), rng.rational(9, 4)};
        Rat k = rng.rational(9, 4);
        if (k == 0) k = 3;
        auto shifted = a, scaled = a;
        for (std::size_t i = 0; i < 6; ++i) {
            shifted[i] = {a[i][0] + u[0], a[i][1] + u[1]};
            scaled[i] = {k * a[i][0], k * a[i][1]};
        }
        CHECK(hexagon_sum(shifted, b) == base);
        auto b_shift = b;
        for (auto& p : b_shift) p = {p[0] + u[1], p[1] - u[0]};
        CHECK(hexagon_sum(a, b_shift) == base);
        CHECK(hexagon_sum(scaled, b) == k * k * k * base);
    }
}

TEST_CASE("singularity test") {
    auto pl = fixture::case_pipeline();
    const auto& s = pl->surface;
    auto origin = is_singular(s, Vec3d{0, 0, 0}, 1e-8);
    CHECK(origin.singular);
    CHECK(origin.residual == 0);
    CHECK_FALSE(is_singular(s, Vec3d{1.234, -0.567, 2.891}, 1e-8).singular);
    auto pts = sample_surface_points(s, 50, 7, 10);
    REQUIRE(pts.size() == 50);
    for (const auto& P : pts) CHECK(is_singular(s, P, 1e-12).singular);
    auto again = sample_surface_points(s, 50, 7, 10);
    CHECK(again.front() == pts.front());
    CHECK(again.back() == pts.back());
}

TEST_CASE("smoothness probe") {
    const auto& s = fixture::case_pipeline()->surface;
    auto rep = smoothness_probe(s, 200, 1);
    CHECK(rep.samples == 200);
    CHECK(rep.rank_five == 200);
    CHECK_FALSE(rep.possibly_singular);
    auto none = smoothness_probe(s, 0, 1);
    CHECK(none.samples == 0);
    CHECK(none.rank_five == 0);
}
