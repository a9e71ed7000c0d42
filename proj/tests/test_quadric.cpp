#include "doctest.h"
#include "gsing/quadric.hpp"
#include "support.hpp"

using namespace gsing;
using fixture::poly;

namespace {

const QuadricModel& case_quadric() { return fixture::case_pipeline()->quadric; }

Vec3Q v(int a, int b, int c) { return {Rat(a), Rat(b), Rat(c)}; }

Vec3Q combine(const std::array<Rat, 3>& c, const Architecture& arch, const std::array<std::size_t, 3>& basis) {
    Vec3Q out;
    for (std::size_t k = 0; k < 3; ++k) out = out + c[k] * arch.base[basis[k]];
    return out;
}

bool proportional(const QMatrix& a, const QMatrix& b) {
    std::optional<Rat> c;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if ((a(i, j) == 0) != (b(i, j) == 0)) return false;
            if (b(i, j) == 0) continue;
            if (!c) c = a(i, j) / b(i, j);
            if (a(i, j) / b(i, j) != *c) return false;
        }
    return c.has_value();
}

QMatrix restricted(const QMatrix& q, const QMatrix& n) { return n.transpose() * q * n; }

}  // namespace

TEST_CASE("dependency coefficients") {
    const auto& arch = fixture::case_study().arch;
    // forced triple A_2, A_3, A_4: [A_2, A_3, A_4] = 2 (4 + 1) = 10
    auto d = dependency_coefficients(arch, std::array<std::size_t, 3>{1, 2, 3});
    CHECK(d.mixed == 10);
    CHECK(d.others == std::array<std::size_t, 2>{4, 5});
    CHECK(combine(d.alpha, arch, d.basis) == v(1, 0, 1));
    CHECK(combine(d.beta, arch, d.basis) == v(6, 3, 0));

    auto best = dependency_coefficients(arch);
    CHECK(combine(best.alpha, arch, best.basis) == arch.base[best.others[0]]);
    CHECK(combine(best.beta, arch, best.basis) == arch.base[best.others[1]]);
    CHECK(abs(best.mixed) >= 10);
}

TEST_CASE("coplanar base joints are degenerate") {
    auto spec = load_platform_spec(fixture::data_path("planar.json"));
    try {
        dependency_coefficients(spec.arch);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::degenerate);
    }
}

TEST_CASE("a forced dependent triple is rejected") {
    auto arch = fixture::case_study().arch;
    arch.base[3] = arch.base[1] + arch.base[2];
    CHECK_THROWS_AS(dependency_coefficients(arch, std::array<std::size_t, 3>{1, 2, 3}), Error);
}

TEST_CASE("ell identity") {
    const auto& arch = fixture::case_study().arch;
    std::array<Vec3Q, 3> triple{arch.base[1], arch.base[2], arch.base[3]};
    CHECK(ell_identity_check(v(1, 2, 3), triple) == Vec3Q{});
    CHECK(ell_identity_check(arch.base[1], triple) == Vec3Q{});
    Rng rng(51, 1);
    for (int trial = 0; trial < 100; ++trial) {
        std::array<Vec3Q, 3> t;
        for (auto& a : t) a = {rng.rational(9, 5), rng.rational(9, 5), rng.rational(9, 5)};
        Vec3Q w{rng.rational(9, 5), rng.rational(9, 5), rng.rational(9, 5)};
        CHECK(ell_identity_check(w, t) == Vec3Q{});
    }
}

TEST_CASE("case-study quadric matches the published equations") {
    const auto& q = case_quadric();
    CHECK(q.generic);
    std::array<TwistQ, 2> published{linear_form_coeffs(poly(fixture::kLinear1)), linear_form_coeffs(poly(fixture::kLinear2))};
    std::array<TwistQ, 2> ours{q.lin1, q.lin2};
    CHECK(same_linear_span(ours, published));

    // span equality by rank: both pairs and their union have rank 2
    QMatrix stack(4, 6);
    for (std::size_t j = 0; j < 6; ++j) {
        stack(0, j) = q.lin1[j];
        stack(1, j) = q.lin2[j];
        stack(2, j) = published[0][j];
        stack(3, j) = published[1][j];
    }
    CHECK(stack.rank() == 2);

    // quadratic forms restricted to the common 4-space are proportional
    QMatrix lin(2, 6);
    for (std::size_t j = 0; j < 6; ++j) {
        lin(0, j) = published[0][j];
        lin(1, j) = published[1][j];
    }
    auto n = lin.nullspace();
    REQUIRE(n.cols() == 4);
    auto pub_q = quadratic_form_matrix(poly(fixture::kQuadratic));
    CHECK(proportional(restricted(q.quad, n), restricted(pub_q, n)));
    CHECK(same_quadric_modulo_span(published, q.quad, pub_q));
    CHECK(quadratic_form_poly(q.quad) == q.quad_poly);
    CHECK(linear_form_poly(q.lin1) == q.lin1_poly);
}

TEST_CASE("quadric does not depend on the basis triple") {
    const auto& cs = fixture::case_study();
    const auto& map = *fixture::case_pipeline()->map;
    auto a = quadric_equations(cs.arch, cs.orient, map, std::array<std::size_t, 3>{1, 2, 3});
    auto b = quadric_equations(cs.arch, cs.orient, map, std::array<std::size_t, 3>{2, 4, 5});
    CHECK(same_quadric(a, b));
    CHECK(same_quadric(a, case_quadric()));
}

TEST_CASE("reciprocal twists lie on the quadric") {
    auto pl = fixture::case_pipeline();
    const auto& q = case_quadric();
    for (const auto& P : sample_surface_points(pl->surface, 50, 5, 10)) {
        auto r = pl->map->rec(P, 1e-8);
        CHECK(quadric_membership(q, r.twist.coords()).max_relative() <= 1e-8);
    }
    CHECK(quadric_membership_exact(q, q.base_point) == std::array<Rat, 3>{0, 0, 0});
    auto r0 = pl->map->rec_exact(Vec3Q{});
    REQUIRE(r0.has_value());
    CHECK(*r0 == q.base_point);
}

TEST_CASE("membership residual scaling") {
    const auto& q = case_quadric();
    TwistQ t{Rat(1), Rat(-2), Rat(3, 2), Rat(5), Rat(0), Rat(-1, 3)};
    auto r = quadric_membership_exact(q, t);
    CHECK(r != std::array<Rat, 3>{0, 0, 0});
    Rat lambda(7, 3);
    TwistQ s;
    for (std::size_t i = 0; i < 6; ++i) s[i] = lambda * t[i];
    auto rs = quadric_membership_exact(q, s);
    CHECK(rs[0] == lambda * r[0]);
    CHECK(rs[1] == lambda * r[1]);
    CHECK(rs[2] == lambda * lambda * r[2]);
    CHECK_THROWS_AS(quadric_membership(q, std::array<double, 6>{}), Error);
}

TEST_CASE("stereographic parametrization of the quadric") {
    const auto& q = case_quadric();
    QuadricParametrization par(q);
    CHECK(par.nondegenerate());
    Rng rng(52, 1);
    std::vector<TwistQ> seen;
    for (int trial = 0; trial < 100; ++trial) {
        Rat s = rng.rational(20, 7), t = rng.rational(20, 7);
        auto tw = par.evaluate(s, t);
        REQUIRE(tw.has_value());
        CHECK(quadric_membership_exact(q, *tw) == std::array<Rat, 3>{0, 0, 0});
        auto st = par.inverse(*tw);
        if (st) {
            CHECK((*st)[0] == s);
            CHECK((*st)[1] == t);
        }
        auto polys = par.polynomials();
        std::array<Rat, kVarCount> pt{};
        pt[static_cast<std::size_t>(Var::s)] = s;
        pt[static_cast<std::size_t>(Var::t)] = t;
        for (std::size_t i = 0; i < 6; ++i) CHECK(polys[i].evaluate(pt) == (*tw)[i]);
        seen.push_back(*tw);
    }
    // distinct parameters give distinct points of P^5
    std::size_t collisions = 0;
    for (std::size_t i = 0; i < seen.size(); ++i)
        for (std::size_t j = i + 1; j < seen.size(); ++j) {
            std::array<double, 6> a, b;
            for (std::size_t k = 0; k < 6; ++k) {
                a[k] = to_double(seen[i][k]);
                b[k] = to_double(seen[j][k]);
            }
            if (projective_distance(a, b) < 1e-12) ++collisions;
        }
    CHECK(collisions <= 2);
}

TEST_CASE("tangent directions return the base point") {
    const auto& q = case_quadric();
    QuadricParametrization par(q);
    for (Rat s : {Rat(0), Rat(1, 2), Rat(-3)}) {
        auto t = par.tangent_parameter(s);
        REQUIRE(t.has_value());
        auto tw = par.evaluate(s, *t);
        REQUIRE(tw.has_value());
        Rat c = 0;
        for (std::size_t i = 0; i < 6 && c == 0; ++i)
            if (q.base_point[i] != 0) c = (*tw)[i] / q.base_point[i];
        CHECK(c != 0);
        for (std::size_t i = 0; i < 6; ++i) CHECK((*tw)[i] == c * q.base_point[i]);
    }
}

TEST_CASE("floating parametrization agrees with the exact one") {
    QuadricParametrization par(case_quadric());
    auto e = par.evaluate(Rat(1, 4), Rat(-3, 2));
    auto f = par.evaluate(0.25, -1.5);
    REQUIRE(e.has_value());
    for (std::size_t i = 0; i < 6; ++i) CHECK(f[i] == doctest::Approx(to_double((*e)[i])).epsilon(1e-12));
}
