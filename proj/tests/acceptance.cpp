// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "support.hpp"

using namespace gsing;
using fixture::poly;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream note;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            note << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto t0 = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.note << " [exception: " << e.what() << "]";
    }
    double dt = seconds_since(t0);
    if (!o.pass) ++failures;
    std::printf("%s %2d  %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", id, title, dt, o.note.str().c_str());
    std::fflush(stdout);
}

std::array<MultiPoly, 6> parse6(const std::array<const char*, 6>& s) {
    std::array<MultiPoly, 6> out;
    for (std::size_t i = 0; i < 6; ++i) out[i] = poly(s[i]);
    return out;
}

// Coefficientwise agreement of two integer polynomials after scaling both to monic.
double monic_gap(const std::vector<BigInt>& got, const std::vector<long long>& want) {
    if (got.size() != want.size()) return 1e300;
    double lg = to_double(Rat(got.back())), lw = static_cast<double>(want.back()), gap = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        double a = to_double(Rat(got[i])) / lg, b = static_cast<double>(want[i]) / lw;
        gap = std::max(gap, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
    return gap;
}

}  // namespace

int main() {
    const auto& cs = fixture::case_study();

    criterion(1, "case-study cubic reproduced exactly, < 1 s", [&](Outcome& o) {
        auto t0 = Clock::now();
        auto s = cubic_surface(cs.arch, cs.orient);
        double dt = seconds_since(t0);
        o.require(s.degree == 3, "degree 3");
        o.require(fixture::proportional(s.F, poly(fixture::kCubic)), "F proportional to the published cubic");
        o.require(dt < 1.0, "runtime");
    });

    criterion(2, "infinity cubic and the B-form sum", [&](Outcome& o) {
        auto ic = infinity_cubic(cubic_surface(cs.arch, cs.orient));
        o.require(fixture::proportional(ic.graded, poly(fixture::kInfinityCubic)), "graded part");
        o.require(fixture::proportional(ic.b_form, poly(fixture::kInfinityCubic)), "B-form sum");
        o.require(ic.b_form == ic.c_form, "B-form equals C-form");
    });

    auto pl = fixture::case_pipeline();

    criterion(3, "quadratic twist formulas up to one scalar", [&](Outcome& o) {
        o.require(pl->map->quadratic().degree() <= 2, "degree <= 2");
        o.require(fixture::proportional(pl->map->quadratic().coords(), parse6(fixture::kTwistFormulas)),
                  "common scalar");
    });

    criterion(4, "quadric span and quadratic form", [&](Outcome& o) {
        std::array<TwistQ, 2> published{linear_form_coeffs(poly(fixture::kLinear1)),
                                        linear_form_coeffs(poly(fixture::kLinear2))};
        std::array<TwistQ, 2> ours{pl->quadric.lin1, pl->quadric.lin2};
        o.require(same_linear_span(ours, published), "linear span");
        o.require(same_quadric_modulo_span(published, pl->quadric.quad, quadratic_form_matrix(poly(fixture::kQuadratic))),
                  "quadratic form modulo the span");
    });

    criterion(5, "L and the cubic fallback factor", [&](Outcome& o) {
        o.require(fixture::proportional(pl->map->infinity().L, poly(fixture::kL)), "L");
        auto model = infinity_model(*pl);
        o.require(fixture::proportional(model.fallback_factor, poly(fixture::kFallbackFactor)), "fallback factor");
    });

    LineSearchResult lines;
    LineClassification cls;
    criterion(6, "27 real lines, 2/5/10/10, < 60 s", [&](Outcome& o) {
        auto t0 = Clock::now();
        lines = find_lines(pl->surface.F);
        cls = classify(lines.lines, incidence(lines.lines));
        double dt = seconds_since(t0);
        o.require(lines.lines.size() == 27 && lines.real_count == 27, "27 real lines");
        o.require(lines.max_residual <= 1e-8, "residuals");
        o.require(cls.found && cls.partition_ok, "partition");
        o.require(cls.s2_skew, "S2 skew");
        o.require(cls.s5_meet_both, "S5 meets both");
        o.require(dt < 60, "runtime");
    });

    criterion(7, "orbit polynomials F2 and F5", [&](Outcome& o) {
        o.require(cls.s2_poly.rational && monic_gap(cls.s2_poly.integer, fixture::kF2) <= 1e-6, "F2");
        o.require(cls.s5_poly.rational && monic_gap(cls.s5_poly.integer, fixture::kF5) <= 1e-6, "F5");
    });

    criterion(8, "five exceptional points", [&](Outcome& o) {
        auto ex = exceptional_points(*pl, lines.lines, cls);
        o.require(ex.points.size() == 5, "five points");
        o.require(ex.min_pairwise_distance > 1e-6, "distinct");
        for (const auto& p : ex.points) {
            o.require(p.membership <= 1e-8, "on Q");
            o.require(p.self_reciprocity <= 1e-8, "self-reciprocal");
            o.require(p.axis_residual <= 1e-8, "axis meets the limbs");
            o.require(p.cramer <= 1e-6, "Cramer determinant");
        }
    });

    criterion(9, "birationality and 500 exact poses", [&](Outcome& o) {
        auto rep = rec_pos_roundtrip_report(*pl, 100, 1);
        o.require(rep.samples_surface == 100 && rep.max_pos_rec <= 1e-8, "Pos(Rec(P))");
        o.require(rep.samples_quadric == 100 && rep.max_rec_pos <= 1e-8, "Rec(Pos(t))");
        SingularityParametrization sp(pl);
        Rng rng(9, 1);
        std::size_t made = 0, tries = 0;
        while (made < 500 && tries < 1000) {
            ++tries;
            auto P = sp.evaluate(rng.rational(50, 7), rng.rational(50, 7));
            if (!P) continue;
            o.require(pl->surface.F.evaluate(position_point((*P)[0], (*P)[1], (*P)[2])) == 0, "F(P) = 0");
            ++made;
        }
        o.require(made == 500, "500 poses");
    });

    criterion(10, "property suites", [&](Outcome& o) {
        Rng rng(10, 1);
        auto rq = [&] { return rng.rational(9, 5); };
        for (int i = 0; i < 100; ++i) {
            std::array<Vec3Q, 3> t{Vec3Q{rq(), rq(), rq()}, Vec3Q{rq(), rq(), rq()}, Vec3Q{rq(), rq(), rq()}};
            o.require(ell_identity_check(Vec3Q{rq(), rq(), rq()}, t) == Vec3Q{}, "ell identity");
        }
        for (int i = 0; i < 20; ++i) {
            std::array<Vec2Q, 6> a, b;
            for (std::size_t k = 0; k < 6; ++k) {
                a[k] = {rq(), rq()};
                b[k] = {rq(), rq()};
            }
            Rat base = hexagon_sum(a, b), h = rq();
            if (h == 0) h = 2;
            Vec2Q u{rq(), rq()};
            auto scaled = a, shifted = a;
            for (std::size_t k = 0; k < 6; ++k) {
                scaled[k] = {h * a[k][0], h * a[k][1]};
                shifted[k] = {a[k][0] + u[0], a[k][1] + u[1]};
            }
            o.require(hexagon_sum(scaled, b) == h * h * h * base, "homothety");
            o.require(hexagon_sum(shifted, b) == base, "translation");
        }
        for (std::uint64_t seed = 0; seed <= 3; ++seed) {
            auto spec = seed == 0 ? cs : random_platform_spec(seed);
            auto q = twist_quadratic_bundle(spec.arch, spec.orient);
            o.require(q.graded_part(3).is_zero() && q.degree() <= 2, "T1/T2 permutation sums");
            auto sums = twist_column_sums(jacobian_matrix(spec.arch, spec.orient));
            o.require(sums.graded_part(3).is_zero() && sums.degree() <= 2, "T1/T2 cofactor sums");
        }
        for (int i = 0; i < 50; ++i) {
            Rat p = rq(), q = rq(), r = rq();
            auto back = cayley_params(cayley_rotation(p, q, r).R);
            o.require(back == std::array<Rat, 3>{p, q, r}, "Cayley round trip");
        }
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            auto spec = random_platform_spec(seed);
            for (const auto& l : limb_screws(spec.arch, spec.orient, Vec3Q{rq(), rq(), rq()}))
                o.require(dot(l.direction, l.moment) == 0, "limb screw F.M = 0");
        }
    });

    criterion(11, "genericity on 3 random platforms, < 5 min", [&](Outcome& o) {
        auto t0 = Clock::now();
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            auto spec = random_platform_spec(seed);
            auto rpl = OrientationPipeline::build(spec.arch, spec.orient);
            auto rep = blowup_report(*rpl);
            std::string tag = "seed " + std::to_string(seed) + ": ";
            o.require(rep.surface_degree == 3, tag + "degree 3");
            o.require(rep.search.lines.size() == 27, tag + "27 lines");
            o.require(rep.cls.partition_ok, tag + "2/5/10/10");
            o.require(rep.exceptional.points.size() == 5, tag + "five exceptional points");
            for (const auto& f : rep.findings) o.require(false, tag + f);
        }
        o.require(seconds_since(t0) < 300, "runtime");
    });

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
