#include "gsing/lines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace gsing {

std::string_view chart_name(LineChart c) {
    switch (c) {
        case LineChart::x: return "x";
        case LineChart::y: return "y";
        case LineChart::z: return "z";
        case LineChart::infinity: return "infinity";
    }
    return "?";
}

namespace {

using C3 = std::array<cplx, 3>;

double mag(const cplx& z) { return std::abs(z); }
double mag(const HpC& z) { return static_cast<double>(abs(z)); }
cplx to_cplx(const HpC& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }
HpC to_hpc(const cplx& z) { return HpC(Hp(z.real()), Hp(z.imag())); }

template <class C>
std::array<C, 3> cross3(const std::array<C, 3>& a, const std::array<C, 3>& b) {
    return {C(a[1] * b[2] - a[2] * b[1]), C(a[2] * b[0] - a[0] * b[2]), C(a[0] * b[1] - a[1] * b[0])};
}

template <class C>
C dot3(const std::array<C, 3>& a, const std::array<C, 3>& b) {
    return C(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
}

template <class C>
std::array<C, 3> dir_of(const std::array<C, 6>& p) {
    return {p[0], p[1], p[2]};
}
template <class C>
std::array<C, 3> mom_of(const std::array<C, 6>& p) {
    return {p[3], p[4], p[5]};
}

template <class C>
std::array<C, 6> join(const std::array<C, 3>& d, const std::array<C, 3>& m) {
    return {d[0], d[1], d[2], m[0], m[1], m[2]};
}

template <class C, std::size_t N>
std::array<C, N> scale_to_largest(std::array<C, N> v) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < N; ++i)
        if (mag(v[i]) > mag(v[k])) k = i;
    C piv = v[k];
    for (auto& x : v) x /= piv;
    return v;
}

std::array<std::size_t, 2> others_of(std::size_t k) {
    if (k == 0) return {1, 2};
    if (k == 1) return {0, 2};
    return {0, 1};
}

// Gaussian elimination with partial pivoting; false if singular.
template <std::size_t N, class C>
bool solve_linear(std::array<std::array<C, N>, N> A, std::array<C, N>& b) {
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (mag(A[r][col]) > mag(A[piv][col])) piv = r;
        if (mag(A[piv][col]) == 0) return false;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < N; ++r) {
            C f = A[r][col] / A[col][col];
            for (std::size_t c = col; c < N; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = N; i-- > 0;) {
        C s = b[i];
        for (std::size_t c = i + 1; c < N; ++c) s -= A[i][c] * b[c];
        b[i] = s / A[i][i];
    }
    return true;
}

// ---------------------------------------------------------------- chart systems

const std::array<Var, 4> kChartVars{Var::a, Var::b, Var::c, Var::d};

template <class Real>
struct Poly4 {
    struct Term {
        Real c;
        double cabs;
        std::array<std::uint8_t, 4> e;
    };
    std::vector<Term> terms;

    Poly4() = default;
    explicit Poly4(const MultiPoly& p) {
        for (const auto& [m, c] : p.terms()) {
            Term t{rat_to<Real>(c), std::abs(c.get_d()), {}};
            for (std::size_t v = 0; v < 4; ++v) {
                unsigned e = m[kChartVars[v]];
                if (e > 3) fail(ErrorKind::consistency, "chart equation of degree > 3");
                t.e[v] = static_cast<std::uint8_t>(e);
            }
            terms.push_back(t);
        }
    }

    template <class C>
    C operator()(const std::array<std::array<C, 4>, 4>& pw) const {
        C s = C(0);
        for (const auto& t : terms) {
            C m = C(t.c);
            for (std::size_t v = 0; v < 4; ++v)
                if (t.e[v]) m *= pw[v][t.e[v]];
            s += m;
        }
        return s;
    }
    double magnitude(const std::array<double, 4>& az) const {
        double s = 0;
        for (const auto& t : terms) {
            double m = t.cabs;
            for (std::size_t v = 0; v < 4; ++v)
                for (unsigned k = 0; k < t.e[v]; ++k) m *= az[v];
            s += m;
        }
        return s;
    }
};

template <class C>
std::array<std::array<C, 4>, 4> power_table(const std::array<C, 4>& z) {
    std::array<std::array<C, 4>, 4> pw;
    for (std::size_t v = 0; v < 4; ++v) {
        pw[v][0] = C(1);
        for (std::size_t k = 1; k < 4; ++k) pw[v][k] = pw[v][k - 1] * z[v];
    }
    return pw;
}

/// Coefficients of t^0..t^3 after x_k = t, x_o1 = a + b t, x_o2 = c + d t.
std::array<MultiPoly, 4> chart_equations(const MultiPoly& F, std::size_t k) {
    const std::array<Var, 3> xyz{Var::x, Var::y, Var::z};
    auto o = others_of(k);
    MultiPoly t = MultiPoly::variable(Var::t);
    MultiPoly G = F.substitute(xyz[k], t)
                      .substitute(xyz[o[0]], MultiPoly::variable(Var::a) + MultiPoly::variable(Var::b) * t)
                      .substitute(xyz[o[1]], MultiPoly::variable(Var::c) + MultiPoly::variable(Var::d) * t);
    std::array<MultiPoly, 4> eq;
    const VarSet abcd{Var::a, Var::b, Var::c, Var::d};
    for (auto& e : eq) e = MultiPoly(abcd);
    for (const auto& [m, c] : G.terms()) {
        unsigned e = m[Var::t];
        if (e > 3) fail(ErrorKind::consistency, "surface of degree > 3");
        Monomial mm = m;
        mm.exp[static_cast<std::size_t>(Var::t)] = 0;
        eq[e] += MultiPoly::monomial(c, mm);
    }
    return eq;
}

template <class Real>
struct ChartSystem {
    std::size_t k = 0;
    std::array<Poly4<Real>, 4> g;
    std::array<std::array<Poly4<Real>, 4>, 4> J;

    ChartSystem(const std::array<MultiPoly, 4>& eqs, std::size_t chart) : k(chart) {
        for (std::size_t i = 0; i < 4; ++i) {
            g[i] = Poly4<Real>(eqs[i]);
            for (std::size_t v = 0; v < 4; ++v) J[i][v] = Poly4<Real>(eqs[i].derivative(kChartVars[v]));
        }
    }

    template <class C>
    void eval(const std::array<C, 4>& z, std::array<C, 4>& val, std::array<std::array<C, 4>, 4>* jac) const {
        auto pw = power_table(z);
        for (std::size_t i = 0; i < 4; ++i) {
            val[i] = g[i](pw);
            if (jac)
                for (std::size_t v = 0; v < 4; ++v) (*jac)[i][v] = J[i][v](pw);
        }
    }

    double relative_residual(const std::array<cplx, 4>& z) const {
        auto pw = power_table(z);
        std::array<double, 4> az{std::abs(z[0]), std::abs(z[1]), std::abs(z[2]), std::abs(z[3])};
        double worst = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            if (g[i].terms.empty()) continue;
            cplx v = g[i](pw);
            worst = std::max(worst, std::abs(v) / (1 + g[i].magnitude(az)));
        }
        return worst;
    }
};

template <class Real, class C>
std::optional<std::array<C, 4>> newton(const ChartSystem<Real>& sys, std::array<C, 4> z, int max_iter, double step_tol) {
    for (int it = 0; it < max_iter; ++it) {
        std::array<C, 4> val;
        std::array<std::array<C, 4>, 4> jac;
        sys.eval(z, val, &jac);
        std::array<C, 4> rhs;
        for (std::size_t i = 0; i < 4; ++i) rhs[i] = -val[i];
        if (!solve_linear<4>(jac, rhs)) return std::nullopt;
        double step = 0, size = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            z[i] += rhs[i];
            step = std::max(step, mag(rhs[i]));
            size = std::max(size, mag(z[i]));
        }
        if (!std::isfinite(step) || size > 1e8) return std::nullopt;
        if (step <= step_tol * (1 + size)) return z;
    }
    return std::nullopt;
}

template <class C>
std::array<C, 6> chart_line(std::size_t k, const std::array<C, 4>& z) {
    auto o = others_of(k);
    std::array<C, 3> p, d;
    p[k] = C(0);
    d[k] = C(1);
    p[o[0]] = z[0];
    d[o[0]] = z[1];
    p[o[1]] = z[2];
    d[o[1]] = z[3];
    return join(d, cross3(p, d));
}

template <class C>
std::size_t best_chart(const std::array<C, 6>& pl) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (mag(pl[i]) > mag(pl[k])) k = i;
    return k;
}

// Chart coefficients of a line in chart k (requires direction_k != 0).
template <class C>
std::array<C, 4> chart_coords(const std::array<C, 6>& pl, std::size_t k) {
    auto d = dir_of(pl);
    auto m = mom_of(pl);
    std::array<C, 3> e{C(0), C(0), C(0)};
    e[k] = C(1);
    auto p = cross3(e, m);
    auto o = others_of(k);
    return {C(p[o[0]] / d[k]), C(d[o[0]] / d[k]), C(p[o[1]] / d[k]), C(d[o[1]] / d[k])};
}

double pdist6(const Plucker& a, const Plucker& b) { return projective_distance(a, b); }

// ---------------------------------------------------------------- lines at infinity

std::vector<Plucker> lines_at_infinity(const MultiPoly& F, std::uint64_t seed, std::size_t restarts) {
    std::vector<Plucker> out;
    MultiPoly H3 = F.graded_part(kPositionVars, 3);
    if (H3.is_zero()) return out;
    MultiPoly x = MultiPoly::variable(Var::x), y = MultiPoly::variable(Var::y), z = MultiPoly::variable(Var::z);
    MultiPoly a = MultiPoly::variable(Var::a), b = MultiPoly::variable(Var::b);

    if (H3.substitute(Var::x, Rat(0)).is_zero()) out.push_back({0, 0, 0, 1, 0, 0});

    // plane y = a x
    {
        MultiPoly G = H3.substitute(Var::y, a * x);
        std::array<std::vector<double>, 4> coeffs;
        for (auto& c : coeffs) c.assign(4, 0.0);
        for (const auto& [m, c] : G.terms()) coeffs[m[Var::x]][m[Var::a]] += c.get_d();
        std::size_t first = 0;
        while (first < 4 && std::all_of(coeffs[first].begin(), coeffs[first].end(), [](double v) { return v == 0; }))
            ++first;
        if (first < 4)
            for (cplx r : poly_roots(coeffs[first])) {
                bool all = true;
                for (const auto& c : coeffs) {
                    cplx v = 0;
                    double s = 0;
                    for (std::size_t k = 4; k-- > 0;) v = v * r + c[k];
                    for (std::size_t k = 0; k < 4; ++k) s += std::abs(c[k]) * std::pow(std::abs(r), k);
                    all = all && std::abs(v) <= 1e-9 * (1 + s);
                }
                if (all) out.push_back({0, 0, 0, r, -1, 0});
            }
    }

    // plane z = a x + b y: 2x2 Newton on two coefficients, the other two verified
    {
        MultiPoly G = H3.substitute(Var::z, a * x + b * y);
        std::array<MultiPoly, 4> eq;
        for (auto& e : eq) e = MultiPoly(VarSet{Var::a, Var::b, Var::c, Var::d});
        for (const auto& [m, c] : G.terms()) {
            Monomial mm = m;
            mm.exp[static_cast<std::size_t>(Var::x)] = 0;
            mm.exp[static_cast<std::size_t>(Var::y)] = 0;
            eq[m[Var::x]] += MultiPoly::monomial(c, mm);
        }
        std::array<Poly4<double>, 4> g;
        std::array<std::array<Poly4<double>, 2>, 4> J;
        for (std::size_t i = 0; i < 4; ++i) {
            g[i] = Poly4<double>(eq[i]);
            J[i][0] = Poly4<double>(eq[i].derivative(Var::a));
            J[i][1] = Poly4<double>(eq[i].derivative(Var::b));
        }
        std::vector<Plucker> found;
        for (std::size_t rs = 0; rs < restarts; ++rs) {
            Rng rng(seed, 0x1AF0000 + rs);
            std::array<cplx, 4> zz{cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal()), 0, 0};
            bool ok = false;
            for (int it = 0; it < 60 && !ok; ++it) {
                auto pw = power_table(zz);
                std::array<std::array<cplx, 2>, 2> A{{{J[3][0](pw), J[3][1](pw)}, {J[2][0](pw), J[2][1](pw)}}};
                std::array<cplx, 2> rhs{-g[3](pw), -g[2](pw)};
                if (!solve_linear<2>(A, rhs)) break;
                zz[0] += rhs[0];
                zz[1] += rhs[1];
                double size = std::max(std::abs(zz[0]), std::abs(zz[1]));
                if (!std::isfinite(size) || size > 1e8) break;
                ok = std::max(std::abs(rhs[0]), std::abs(rhs[1])) <= 1e-13 * (1 + size);
            }
            if (!ok) continue;
            auto pw = power_table(zz);
            std::array<double, 4> az{std::abs(zz[0]), std::abs(zz[1]), 0, 0};
            bool all = true;
            for (std::size_t i = 0; i < 4; ++i) all = all && std::abs(g[i](pw)) <= 1e-9 * (1 + g[i].magnitude(az));
            if (!all) continue;
            Plucker p{0, 0, 0, zz[0], zz[1], -1};
            p = scale_to_largest(p);
            if (std::none_of(found.begin(), found.end(), [&](const Plucker& q) { return pdist6(p, q) <= 1e-6; }))
                found.push_back(p);
        }
        for (const auto& p : found)
            if (std::none_of(out.begin(), out.end(), [&](const Plucker& q) { return pdist6(p, q) <= 1e-6; }))
                out.push_back(p);
    }
    for (auto& p : out) p = scale_to_largest(p);
    return out;
}

// ---------------------------------------------------------------- tritangent completion

using C4 = std::array<cplx, 4>;

// Two homogeneous points (w, x, y, z) of an affine line, from random planes.
std::array<C4, 2> line_points(const Plucker& L, Rng& rng) {
    auto d = dir_of(L);
    auto m = mom_of(L);
    std::array<C4, 2> out;
    for (auto& X : out) {
        cplx p0(rng.normal(), rng.normal());
        C3 pv{cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal())};
        auto pm = cross3(pv, m);
        X = {dot3(pv, d), pm[0] - p0 * d[0], pm[1] - p0 * d[1], pm[2] - p0 * d[2]};
    }
    return out;
}

Plucker line_through(const C4& a, const C4& b) {
    C3 pa{a[1], a[2], a[3]}, pb{b[1], b[2], b[3]};
    C3 d{a[0] * pb[0] - b[0] * pa[0], a[0] * pb[1] - b[0] * pa[1], a[0] * pb[2] - b[0] * pa[2]};
    return join(d, cross3(pa, pb));
}

std::array<C3, 2> split_degenerate_conic(const std::array<C3, 3>& M) {
    // adj(M) = -p p^T with p = g x h for M = g h^T + h g^T
    std::array<C3, 3> B;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            std::size_t r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            B[i][j] = M[r0][c0] * M[r1][c1] - M[r0][c1] * M[r1][c0];
        }
    std::size_t i = 0;
    for (std::size_t k = 1; k < 3; ++k)
        if (std::abs(B[k][k]) > std::abs(B[i][i])) i = k;
    cplx beta = std::sqrt(-B[i][i]);
    C3 p{0, 0, 0};
    if (std::abs(beta) > 0)
        for (std::size_t k = 0; k < 3; ++k) p[k] = B[k][i] / beta;
    std::array<C3, 3> A = M;
    A[0][1] += p[2];
    A[1][0] -= p[2];
    A[0][2] -= p[1];
    A[2][0] += p[1];
    A[1][2] += p[0];
    A[2][1] -= p[0];
    std::size_t bi = 0, bj = 0;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            if (std::abs(A[r][c]) > std::abs(A[bi][bj])) {
                bi = r;
                bj = c;
            }
    return {A[bi], C3{A[0][bj], A[1][bj], A[2][bj]}};
}

std::vector<Plucker> meeting_lines(const CompiledPoly<double>& Fh, const Plucker& L, Rng& rng) {
    auto pts = line_points(L, rng);
    C4 q0, q1;
    for (auto& v : q0) v = cplx(rng.normal(), rng.normal());
    for (auto& v : q1) v = cplx(rng.normal(), rng.normal());
    auto G = [&](cplx u, cplx v, const C4& q) {
        std::array<cplx, kVarCount> pt{};
        for (std::size_t k = 0; k < 4; ++k) pt[k] = u * pts[0][k] + v * pts[1][k] + q[k];
        return Fh(pt);
    };
    auto conic = [&](cplx lambda) {
        C4 q;
        for (std::size_t k = 0; k < 4; ++k) q[k] = q0[k] + lambda * q1[k];
        cplx f00 = G(0, 0, q), fp0 = G(1, 0, q), fm0 = G(-1, 0, q), f0p = G(0, 1, q), f0m = G(0, -1, q),
             f11 = G(1, 1, q);
        cplx c6 = f00;
        cplx c1 = (fp0 + fm0) / 2.0 - c6, c4 = (fp0 - fm0) / 2.0;
        cplx c3 = (f0p + f0m) / 2.0 - c6, c5 = (f0p - f0m) / 2.0;
        cplx c2 = f11 - c1 - c3 - c4 - c5 - c6;
        std::array<C3, 3> M{C3{c1, c2 / 2.0, c4 / 2.0}, C3{c2 / 2.0, c3, c5 / 2.0}, C3{c4 / 2.0, c5 / 2.0, c6}};
        return M;
    };
    auto det3 = [](const std::array<C3, 3>& M) { return dot3(M[0], cross3(M[1], M[2])); };

    const std::size_t n = 6;
    std::vector<cplx> vals(n), coeffs(n);
    for (std::size_t j = 0; j < n; ++j) vals[j] = det3(conic(std::polar(1.0, 2 * M_PI * double(j) / double(n))));
    for (std::size_t k = 0; k < n; ++k) {
        cplx s = 0;
        for (std::size_t j = 0; j < n; ++j) s += vals[j] * std::polar(1.0, -2 * M_PI * double(j * k) / double(n));
        coeffs[k] = s / double(n);
    }
    std::vector<Plucker> out;
    for (cplx lambda : poly_roots(coeffs)) {
        C4 q;
        for (std::size_t k = 0; k < 4; ++k) q[k] = q0[k] + lambda * q1[k];
        for (const auto& g : split_degenerate_conic(conic(lambda))) {
            std::size_t big = 0;
            for (std::size_t k = 1; k < 3; ++k)
                if (std::abs(g[k]) > std::abs(g[big])) big = k;
            std::array<C4, 2> Y;
            for (std::size_t s = 0; s < 2; ++s) {
                C3 e{0, 0, 0};
                e[(big + 1 + s) % 3] = 1;
                C3 X = cross3(g, e);
                for (std::size_t k = 0; k < 4; ++k) Y[s][k] = X[0] * pts[0][k] + X[1] * pts[1][k] + X[2] * q[k];
            }
            out.push_back(line_through(Y[0], Y[1]));
        }
    }
    return out;
}

// ---------------------------------------------------------------- finishing

struct Candidate {
    Plucker pl;
    LineChart chart;
    bool completion = false;
};

double line_residual(const CompiledPoly<double>& F, const CompiledPoly<double>& H3, const Line3& l) {
    double worst = 0;
    if (l.at_infinity()) {
        auto m = mom_of(l.plucker);
        std::size_t big = 0;
        for (std::size_t k = 1; k < 3; ++k)
            if (std::abs(m[k]) > std::abs(m[big])) big = k;
        for (std::size_t s = 0; s < 3; ++s) {
            C3 e{0, 0, 0};
            e[(big + 1) % 3] = 1;
            e[(big + 2) % 3] = double(s) - 1;
            auto v = cross3(m, e);
            auto pt = position_point<cplx>(v[0], v[1], v[2]);
            double mg = H3.magnitude(pt);
            worst = std::max(worst, mg > 0 ? std::abs(H3(pt)) / mg : 0);
        }
        return worst;
    }
    auto p = l.point();
    auto u = l.direction();
    double scale = 1 + std::sqrt(std::norm(p[0]) + std::norm(p[1]) + std::norm(p[2]));
    for (double T : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
        auto pt = position_point<cplx>(p[0] + T * scale * u[0], p[1] + T * scale * u[1], p[2] + T * scale * u[2]);
        worst = std::max(worst, std::abs(F(pt)) / (1 + F.magnitude(pt)));
    }
    return worst;
}

template <class Real, class C>
std::array<C, 6> polish(const std::array<ChartSystem<Real>, 3>& systems, const Plucker& pl, bool* ok) {
    std::size_t k = best_chart(pl);
    std::array<C, 6> start;
    for (std::size_t i = 0; i < 6; ++i) start[i] = C(pl[i]);
    if constexpr (std::is_same_v<C, HpC>)
        for (std::size_t i = 0; i < 6; ++i) start[i] = to_hpc(pl[i]);
    auto z0 = chart_coords(start, k);
    double tol = std::is_same_v<C, HpC> ? 1e-90 : 1e-15;
    auto z = newton(systems[k], z0, std::is_same_v<C, HpC> ? 16 : 40, tol);
    *ok = z.has_value();
    if (!z) {
        // a step stalling just above the tolerance still improves the line
        z = z0;
        for (int it = 0; it < 8; ++it) {
            std::array<C, 4> val;
            std::array<std::array<C, 4>, 4> jac;
            systems[k].eval(*z, val, &jac);
            for (auto& v : val) v = -v;
            if (!solve_linear<4>(jac, val)) break;
            for (std::size_t i = 0; i < 4; ++i) (*z)[i] += val[i];
        }
    }
    return chart_line(k, *z);
}

}  // namespace

// ---------------------------------------------------------------- Line3

bool Line3::at_infinity() const {
    return std::abs(plucker[0]) + std::abs(plucker[1]) + std::abs(plucker[2]) == 0;
}

std::array<cplx, 3> Line3::point() const {
    if (at_infinity()) fail(ErrorKind::domain, "line at infinity has no affine point");
    std::size_t k = best_chart(plucker);
    auto z = chart_coords(plucker, k);
    auto o = others_of(k);
    C3 p;
    p[k] = 0;
    p[o[0]] = z[0];
    p[o[1]] = z[2];
    return p;
}

std::array<cplx, 3> Line3::direction() const {
    C3 d = dir_of(plucker);
    double n = std::sqrt(std::norm(d[0]) + std::norm(d[1]) + std::norm(d[2]));
    if (n == 0) return d;
    for (auto& x : d) x /= n;
    return d;
}

Plucker chart_plucker(const std::array<cplx, 4>& abcd) { return chart_line(0, abcd); }

cplx chart_coplanarity(const std::array<cplx, 4>& l1, const std::array<cplx, 4>& l2) {
    return (l1[0] - l2[0]) * (l1[3] - l2[3]) - (l1[1] - l2[1]) * (l1[2] - l2[2]);
}

cplx line_reciprocal_product(const Plucker& a, const Plucker& b) {
    double na = 0, nb = 0;
    for (std::size_t i = 0; i < 6; ++i) {
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
    }
    cplx r = dot3(dir_of(a), mom_of(b)) + dot3(dir_of(b), mom_of(a));
    return r / std::sqrt(na * nb);
}

Incidence incidence(const std::vector<Line3>& lines, double tol) {
    Incidence inc(lines.size(), std::vector<bool>(lines.size(), false));
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            bool meet = std::abs(line_reciprocal_product(lines[i].plucker, lines[j].plucker)) <= tol;
            inc[i][j] = inc[j][i] = meet;
        }
    return inc;
}

LineSearchResult find_lines(const MultiPoly& F, const LineSearchOptions& opts) {
    LineSearchResult res;
    res.seed = opts.seed;
    res.restarts = opts.restarts;
    res.extended_precision = opts.extended_precision;
    if (F.degree() != 3) {
        res.warnings.push_back("surface is not a cubic (degree " + std::to_string(F.degree()) + ")");
        return res;
    }

    std::array<std::array<MultiPoly, 4>, 3> eqs;
    for (std::size_t k = 0; k < 3; ++k) eqs[k] = chart_equations(F, k);
    std::array<ChartSystem<double>, 3> sys_d{ChartSystem<double>(eqs[0], 0), ChartSystem<double>(eqs[1], 1),
                                             ChartSystem<double>(eqs[2], 2)};

    std::vector<Candidate> cands;
    auto add = [&](const Plucker& p, LineChart chart, bool completion) {
        Plucker n = scale_to_largest(p);
        for (const auto& c : cands)
            if (pdist6(c.pl, n) <= opts.dedup_tol) return false;
        cands.push_back({n, chart, completion});
        return true;
    };

    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<std::optional<std::array<cplx, 4>>> sols(opts.restarts);
        auto run = [&](std::size_t w) {
            for (std::size_t i = w; i < opts.restarts; i += workers) {
                Rng rng(opts.seed, ((k + 1) << 32) + i);
                const double scale = std::array<double, 3>{0.5, 3.0, 15.0}[i % 3];
                std::array<cplx, 4> z;
                for (auto& v : z) v = scale * cplx(rng.normal(), rng.normal());
                auto r = newton(sys_d[k], z, 80, 1e-12);
                if (r && sys_d[k].relative_residual(*r) <= 1e-9) sols[i] = r;
            }
        };
        if (workers == 1) {
            run(0);
        } else {
            std::vector<std::thread> pool;
            for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
            for (auto& t : pool) t.join();
        }
        std::vector<Plucker> chart_found;
        for (const auto& s : sols) {
            if (!s) continue;
            Plucker p = scale_to_largest(chart_line(k, *s));
            if (std::none_of(chart_found.begin(), chart_found.end(),
                             [&](const Plucker& q) { return pdist6(p, q) <= opts.dedup_tol; }))
                chart_found.push_back(p);
            add(p, static_cast<LineChart>(k), false);
        }
        res.per_chart[k] = chart_found.size();
    }
    auto inf_lines = lines_at_infinity(F, opts.seed, std::max<std::size_t>(opts.restarts / 10, 20));
    res.per_chart[3] = inf_lines.size();
    for (const auto& p : inf_lines) add(p, LineChart::infinity, false);

    if (opts.complete && cands.size() < 27) {
        CompiledPoly<double> Fh(F.homogenize(Var::w, 3));
        Rng rng(opts.seed, 0xC0DE);
        std::vector<std::size_t> queue;
        for (std::size_t i = 0; i < cands.size(); ++i)
            if (cands[i].chart != LineChart::infinity) queue.push_back(i);
        std::size_t head = 0;
        while (head < queue.size() && cands.size() < 27 && head < 60) {
            Plucker base = cands[queue[head++]].pl;
            for (const auto& m : meeting_lines(Fh, base, rng)) {
                if (std::abs(m[0]) + std::abs(m[1]) + std::abs(m[2]) == 0) continue;
                bool ok = false;
                Plucker p = polish<double, cplx>(sys_d, scale_to_largest(m), &ok);
                if (!ok || sys_d[best_chart(p)].relative_residual(chart_coords(p, best_chart(p))) > 1e-9) continue;
                if (add(p, static_cast<LineChart>(best_chart(p)), true)) {
                    ++res.completed;
                    queue.push_back(cands.size() - 1);
                }
            }
        }
    }

    // polish, rebuild and sort
    std::optional<std::array<ChartSystem<Hp>, 3>> sys_q;
    if (opts.extended_precision)
        sys_q.emplace(std::array<ChartSystem<Hp>, 3>{ChartSystem<Hp>(eqs[0], 0), ChartSystem<Hp>(eqs[1], 1),
                                                       ChartSystem<Hp>(eqs[2], 2)});
    CompiledPoly<double> Fc(F), H3c(F.graded_part(kPositionVars, 3));
    std::size_t discarded = 0;
    for (const auto& c : cands) {
        Line3 l;
        l.found_in = c.chart;
        l.from_completion = c.completion;
        if (c.chart == LineChart::infinity) {
            l.plucker = c.pl;
        } else {
            bool ok = false;
            std::array<HpC, 6> hp;
            if (sys_q) {
                hp = polish<Hp, HpC>(*sys_q, c.pl, &ok);
            } else {
                auto d = polish<double, cplx>(sys_d, c.pl, &ok);
                for (std::size_t i = 0; i < 6; ++i) hp[i] = to_hpc(d[i]);
            }
            hp = scale_to_largest(hp);
            for (std::size_t i = 0; i < 6; ++i) l.plucker[i] = to_cplx(hp[i]);
            double dmax = std::max({mag(hp[0]), mag(hp[1]), mag(hp[2])});
            if (mag(hp[0]) >= 1e-8 * dmax) {
                auto z = chart_coords(hp, 0);
                l.d_hp = z[3];
                l.chart = std::array<cplx, 4>{to_cplx(z[0]), to_cplx(z[1]), to_cplx(z[2]), to_cplx(z[3])};
            }
        }
        for (const auto& x : l.plucker) l.imag = std::max(l.imag, std::abs(x.imag()));
        l.real = l.imag <= opts.real_tol;
        if (l.real) {
            for (auto& x : l.plucker) x = x.real();
            if (l.chart)
                for (auto& x : *l.chart) x = x.real();
        }
        auto d = dir_of(l.plucker), m = mom_of(l.plucker);
        double nd = std::sqrt(std::norm(d[0]) + std::norm(d[1]) + std::norm(d[2]));
        double nm = std::sqrt(std::norm(m[0]) + std::norm(m[1]) + std::norm(m[2]));
        l.plucker_identity = nd * nm > 0 ? std::abs(dot3(d, m)) / (nd * nm) : 0;
        l.residual = line_residual(Fc, H3c, l);
        if (l.residual > opts.residual_tol) {
            ++discarded;
            continue;
        }
        if (std::any_of(res.lines.begin(), res.lines.end(),
                        [&](const Line3& o) { return pdist6(o.plucker, l.plucker) <= opts.dedup_tol; }))
            continue;
        res.lines.push_back(l);
    }

    auto key = [](const Line3& l) {
        std::array<double, 13> k{};
        k[0] = l.real ? 0 : 1;
        for (std::size_t i = 0; i < 6; ++i) {
            k[1 + i] = std::round(l.plucker[i].real() * 1e8);
            k[7 + i] = std::round(l.plucker[i].imag() * 1e8);
        }
        return k;
    };
    std::stable_sort(res.lines.begin(), res.lines.end(),
                     [&](const Line3& a, const Line3& b) { return key(a) < key(b); });

    for (const auto& l : res.lines) {
        (l.real ? res.real_count : res.complex_count) += 1;
        res.max_residual = std::max(res.max_residual, l.residual);
        res.max_plucker_identity = std::max(res.max_plucker_identity, l.plucker_identity);
    }
    if (discarded)
        res.warnings.push_back(std::to_string(discarded) + " candidate line(s) discarded after polishing: residual above " +
                               "tolerance");
    if (res.lines.size() != 27)
        res.warnings.push_back("found " + std::to_string(res.lines.size()) + " lines, expected 27");
    if (res.max_residual > opts.residual_tol)
        res.warnings.push_back("line residual above tolerance: " + std::to_string(res.max_residual));
    return res;
}

// ---------------------------------------------------------------- orbits

std::vector<HpC> orbit_product(const std::vector<Line3>& lines, const std::vector<std::size_t>& subset) {
    std::vector<HpC> p{HpC(1)};
    for (std::size_t i : subset) {
        if (!lines.at(i).d_hp) fail(ErrorKind::domain, "line outside the x = t chart has no d coefficient");
        const HpC& d = *lines[i].d_hp;
        std::vector<HpC> next(p.size() + 1, HpC(0));
        for (std::size_t k = 0; k < p.size(); ++k) {
            next[k + 1] += p[k];
            next[k] -= d * p[k];
        }
        p = std::move(next);
    }
    return p;
}

OrbitPolynomial orbit_polynomial(const std::vector<Line3>& lines, const std::vector<std::size_t>& subset,
                                 const OrbitOptions& opts) {
    OrbitPolynomial out;
    out.members = subset;
    std::vector<HpC> p;
    try {
        p = orbit_product(lines, subset);
    } catch (const Error& e) {
        out.reason = e.what();
        return out;
    }
    std::vector<Rat> q;
    out.rational = true;
    for (const auto& c : p) {
        out.monic.push_back(static_cast<double>(c.real()));
        out.max_imag = std::max(out.max_imag, static_cast<double>(abs(c.imag())));
        if (!out.rational) continue;
        auto r = rationalize(c.real(), opts.tol, opts.max_den);
        if (!r.ok) {
            out.rational = false;
            out.reason = "coefficient does not rationalize within the denominator bound";
            continue;
        }
        q.push_back(r.value);
        out.match = std::max(out.match, r.error);
    }
    if (out.max_imag > opts.imag_tol) {
        out.rational = false;
        out.reason = "orbit polynomial has non-real coefficients";
    }
    if (!out.rational) return out;
    BigInt l = 1;
    for (const auto& r : q) l = lcm(l, BigInt(r.get_den()));
    if (l > opts.max_den) {
        out.rational = false;
        out.reason = "common denominator exceeds the bound";
        return out;
    }
    BigInt g = 0;
    for (const auto& r : q) {
        BigInt v = BigInt(r.get_num() * (l / r.get_den()));
        out.integer.push_back(v);
        g = gcd(g, v);
    }
    if (g == 0) g = 1;
    for (auto& v : out.integer) {
        v /= g;
        if (abs(v) > out.height) out.height = abs(v);
    }
    if (out.integer.back() < 0)
        for (auto& v : out.integer) v = -v;
    return out;
}

LineClassification classify(const std::vector<Line3>& lines, const Incidence& inc, const OrbitOptions& opts) {
    LineClassification cls;
    cls.inc = inc;
    const std::size_t n = lines.size();
    for (std::size_t i = 0; i < n; ++i)
        cls.row_sums.push_back(static_cast<std::size_t>(std::count(inc[i].begin(), inc[i].end(), true)));

    struct Choice {
        std::size_t i, j;
        std::vector<std::size_t> five;
        OrbitPolynomial p2, p5;
    };
    std::optional<Choice> best;
    auto better = [](const Choice& a, const Choice& b) {
        bool ra = a.p2.rational && a.p5.rational, rb = b.p2.rational && b.p5.rational;
        if (ra != rb) return ra;
        if (a.p2.rational != b.p2.rational) return a.p2.rational;
        if (a.p2.height != b.p2.height) return a.p2.height < b.p2.height;
        return a.p5.height < b.p5.height;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (inc[i][j]) continue;
            std::vector<std::size_t> common;
            for (std::size_t k = 0; k < n; ++k)
                if (inc[i][k] && inc[j][k]) common.push_back(k);
            if (common.size() != 5) continue;
            ++cls.candidates;
            Choice c{i, j, common, orbit_polynomial(lines, {i, j}, opts), {}};
            if (!c.p2.rational) {
                if (!best) best = c;
                continue;
            }
            c.p5 = orbit_polynomial(lines, common, opts);
            if (!best || better(c, *best)) best = c;
        }
    if (!best) {
        cls.reason = "no S2 found: no skew pair with five common transversals";
        return cls;
    }
    if (!best->p2.rational) {
        cls.reason = "no S2 found: no skew pair has a rational orbit polynomial";
        return cls;
    }
    cls.found = true;
    cls.s2 = {best->i, best->j};
    cls.s5 = best->five;
    cls.s2_poly = best->p2;
    cls.s5_poly = best->p5;
    for (std::size_t k = 0; k < n; ++k) {
        if (k == cls.s2[0] || k == cls.s2[1] || std::find(cls.s5.begin(), cls.s5.end(), k) != cls.s5.end()) continue;
        int meets = int(inc[k][cls.s2[0]]) + int(inc[k][cls.s2[1]]);
        if (meets == 1) cls.t10_one.push_back(k);
        if (meets == 0) cls.t10_none.push_back(k);
    }
    cls.t10_one_poly = orbit_polynomial(lines, cls.t10_one, opts);
    cls.t10_none_poly = orbit_polynomial(lines, cls.t10_none, opts);
    cls.s2_skew = !inc[cls.s2[0]][cls.s2[1]];
    cls.s5_meet_both = std::all_of(cls.s5.begin(), cls.s5.end(),
                                   [&](std::size_t k) { return inc[k][cls.s2[0]] && inc[k][cls.s2[1]]; });
    cls.s5_mutually_skew = true;
    for (std::size_t a : cls.s5)
        for (std::size_t b : cls.s5)
            if (a != b && inc[a][b]) cls.s5_mutually_skew = false;
    cls.partition_ok = n == 27 && cls.s5.size() == 5 && cls.t10_one.size() == 10 && cls.t10_none.size() == 10;
    if (!cls.partition_ok) cls.reason = "partition differs from 2/5/10/10";
    return cls;
}

// ---------------------------------------------------------------- exceptional points

namespace {

std::vector<Vec3c> samples_along(const Line3& l) {
    auto p = l.point();
    auto u = l.direction();
    double scale = 1 + std::sqrt(std::norm(p[0]) + std::norm(p[1]) + std::norm(p[2]));
    std::vector<Vec3c> out;
    for (double T : {-1.7, -0.4, 0.6, 1.9}) {
        double s = T * scale;
        out.push_back({p[0] + s * u[0], p[1] + s * u[1], p[2] + s * u[2]});
    }
    return out;
}

double norm6c(const std::array<cplx, 6>& v) {
    double s = 0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

}  // namespace

ExceptionalReport exceptional_points(const OrientationPipeline& pl, const std::vector<Line3>& lines,
                                     const LineClassification& cls, double tol) {
    ExceptionalReport rep;
    if (!cls.found) {
        rep.findings.push_back("no classification: exceptional points not computed");
        return rep;
    }
    for (std::size_t idx : cls.s5) {
        const Line3& l = lines[idx];
        ExceptionalPoint ep;
        ep.line = idx;
        if (l.at_infinity()) {
            rep.findings.push_back("S5 line at infinity");
            continue;
        }
        auto pts = samples_along(l);
        std::vector<std::array<cplx, 6>> tws;
        try {
            for (const auto& P : pts) tws.push_back(pl.map->rec(P, 1e-9).twist.coords());
        } catch (const Error& e) {
            rep.findings.push_back(std::string("rec failed along an S5 line: ") + e.what());
            continue;
        }
        ep.twist = tws[0];
        for (const auto& t : tws) ep.spread = std::max(ep.spread, projective_distance(t, tws[0]));
        double im = 0;
        for (const auto& x : ep.twist) im = std::max(im, std::abs(x.imag()));
        ep.real = im <= 1e-8;
        Vec3c omega{ep.twist[0], ep.twist[1], ep.twist[2]}, v{ep.twist[3], ep.twist[4], ep.twist[5]};
        ep.membership = quadric_membership(pl.quadric, ep.twist).max_relative();
        ep.self_reciprocity = std::abs(dot(omega, v));
        ep.omega_norm = norm(omega);
        if (ep.omega_norm > 0) {
            Vec3c c = (cplx(1) / dot(omega, omega)) * cross(omega, v);
            Vec3c m_axis = cross(c, omega);
            for (const auto& P : pts)
                for (const auto& s : limb_screws(pl.arch, pl.orient, P)) {
                    double den = norm(s.direction) * norm(m_axis) + norm(omega) * norm(s.moment);
                    double r = std::abs(dot(s.direction, m_axis) + dot(omega, s.moment)) / den;
                    ep.axis_residual = std::max(ep.axis_residual, r);
                }
        }
        ep.cramer = cramer_relative_det(pl, ep.twist);
        rep.points.push_back(ep);
    }
    rep.min_pairwise_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.points.size(); ++i)
        for (std::size_t j = i + 1; j < rep.points.size(); ++j)
            rep.min_pairwise_distance =
                std::min(rep.min_pairwise_distance, projective_distance(rep.points[i].twist, rep.points[j].twist));
    if (rep.points.size() < 2) rep.min_pairwise_distance = 0;

    if (rep.points.size() != 5) rep.findings.push_back("expected 5 exceptional points, got " + std::to_string(rep.points.size()));
    if (rep.min_pairwise_distance <= 1e-6) rep.findings.push_back("exceptional points are not pairwise distinct");
    for (const auto& ep : rep.points) {
        std::string tag = "S5 line " + std::to_string(ep.line) + ": ";
        if (ep.spread > tol) rep.findings.push_back(tag + "twist not constant along the line");
        if (ep.membership > tol) rep.findings.push_back(tag + "twist not on Q");
        if (ep.omega_norm <= tol) rep.findings.push_back(tag + "Omega vanishes");
        if (ep.self_reciprocity > tol) rep.findings.push_back(tag + "twist not self-reciprocal");
        if (ep.axis_residual > tol) rep.findings.push_back(tag + "rotation axis misses a limb");
        if (ep.cramer > 1e-6) rep.findings.push_back(tag + "Pos is defined here (Cramer determinant not ~0)");
    }
    return rep;
}

// ---------------------------------------------------------------- blow-up report

namespace {

double bundle_relative(const TwistMap& map, const Vec3c& P) {
    double scale = 0;
    auto v = map.eval_quadratic(P, &scale);
    return scale > 0 ? norm6c(v) / scale : 0;
}

// Smallest relative norm of the cubic fallback row at the candidate common
// zeros on a line: roots of a random combination, plus the point at infinity.
double fallback_min_on_line(const TwistMap& map, std::size_t row, const Line3& l, Rng& rng) {
    auto polys = map.cofactor_row(row).coords();
    auto polys3 = map.cofactor_row(row).graded_part(3).coords();
    std::array<CompiledPoly<double>, 6> f, f3;
    for (std::size_t k = 0; k < 6; ++k) {
        f[k] = CompiledPoly<double>(polys[k]);
        f3[k] = CompiledPoly<double>(polys3[k]);
    }
    auto rel = [](const std::array<CompiledPoly<double>, 6>& fs, const std::array<cplx, kVarCount>& pt) {
        double num = 0, mg = 0;
        for (const auto& p : fs) {
            num += std::norm(p(pt));
            mg += p.magnitude(pt);
        }
        return mg > 0 ? std::sqrt(num) / mg : 0;
    };
    auto p = l.point();
    auto u = l.direction();
    std::array<cplx, 4> g{};
    for (std::size_t k = 0; k < 6; ++k) {
        cplx r(rng.normal(), rng.normal());
        auto c = cubic_along_line(f[k], p, u);
        for (std::size_t i = 0; i < 4; ++i) g[i] += r * c[i];
    }
    double best = rel(f3, position_point<cplx>(u[0], u[1], u[2]));
    for (cplx tau : poly_roots(std::vector<cplx>(g.begin(), g.end())))
        best = std::min(best, rel(f, position_point<cplx>(p[0] + tau * u[0], p[1] + tau * u[1], p[2] + tau * u[2])));
    return best;
}

}  // namespace

BlowupReport blowup_report(const OrientationPipeline& pl, const BlowupOptions& opts) {
    BlowupReport rep;
    rep.surface_degree = static_cast<std::size_t>(std::max(pl.surface.degree, 0));
    if (pl.surface.degree != 3) {
        rep.findings.push_back("surface degree " + std::to_string(pl.surface.degree) +
                               " < 3: the 27-line analysis does not apply");
        return rep;
    }
    rep.search = find_lines(pl.surface.F, opts.search);
    for (const auto& w : rep.search.warnings) rep.findings.push_back(w);
    const auto& lines = rep.search.lines;
    auto inc = incidence(lines);
    rep.cls = classify(lines, inc, opts.orbit);
    if (lines.size() == 27)
        for (std::size_t i = 0; i < 27; ++i)
            if (rep.cls.row_sums[i] != 10) {
                rep.findings.push_back("incidence row sums differ from 10");
                break;
            }
    if (!rep.cls.found) {
        rep.findings.push_back(rep.cls.reason);
    } else {
        if (!rep.cls.partition_ok) rep.findings.push_back(rep.cls.reason);
        if (!rep.cls.s2_skew) rep.findings.push_back("S2 lines are not skew");
        if (!rep.cls.s5_meet_both) rep.findings.push_back("an S5 line misses an S2 line");
        if (!rep.cls.s5_mutually_skew) rep.findings.push_back("S5 lines are not mutually skew");
        if (!rep.cls.s5_poly.rational) rep.findings.push_back("S5 orbit polynomial does not rationalize");

        rep.exceptional = exceptional_points(pl, lines, rep.cls, opts.tol);
        for (const auto& f : rep.exceptional.findings) rep.findings.push_back(f);

        if (lines.size() == 27 && rep.cls.partition_ok) {
            try {
                std::vector<std::size_t> all(27);
                std::iota(all.begin(), all.end(), 0);
                auto full = orbit_product(lines, all);
                std::vector<HpC> prod{HpC(1)};
                std::vector<std::vector<std::size_t>> parts{
                    {rep.cls.s2[0], rep.cls.s2[1]}, rep.cls.s5, rep.cls.t10_one, rep.cls.t10_none};
                for (const auto& part : parts) {
                    auto f = orbit_product(lines, part);
                    std::vector<HpC> next(prod.size() + f.size() - 1, HpC(0));
                    for (std::size_t i = 0; i < prod.size(); ++i)
                        for (std::size_t j = 0; j < f.size(); ++j) next[i + j] += prod[i] * f[j];
                    prod = std::move(next);
                }
                double diff = 0, size = 0;
                for (std::size_t i = 0; i < full.size(); ++i) {
                    diff = std::max(diff, mag(full[i] - prod[i]));
                    size = std::max(size, mag(full[i]));
                }
                rep.product_match = diff / size;
                if (rep.product_match > 1e-10) rep.findings.push_back("27-line product differs from the orbit product");
            } catch (const Error& e) {
                rep.findings.push_back(std::string("27-line product unavailable: ") + e.what());
            }
        }

        // the quadratic bundle vanishes exactly along the S2 lines
        rep.bundle_max_on_s2 = 0;
        rep.bundle_min_off_s2 = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (lines[i].at_infinity()) continue;
            double peak = 0;
            for (const auto& P : samples_along(lines[i])) peak = std::max(peak, bundle_relative(*pl.map, P));
            bool s2 = i == rep.cls.s2[0] || i == rep.cls.s2[1];
            if (s2)
                rep.bundle_max_on_s2 = std::max(rep.bundle_max_on_s2, peak);
            else
                rep.bundle_min_off_s2 = std::min(rep.bundle_min_off_s2, peak);
        }
        if (rep.bundle_max_on_s2 > opts.tol) rep.findings.push_back("quadratic bundle does not vanish on the S2 lines");
        if (rep.bundle_min_off_s2 < 1e-6) rep.findings.push_back("quadratic bundle vanishes on a line outside S2");
    }

    rep.has_infinity = true;
    rep.infinity = infinity_model(pl, opts.tol);
    for (const auto& f : rep.infinity.flags) rep.findings.push_back("infinity: " + f);
    rep.sweep = self_reciprocity_sweep(pl, rep.infinity, opts.infinity_samples, opts.search.seed, opts.tol);
    if (rep.sweep.failures > 0)
        rep.findings.push_back("infinity: " + std::to_string(rep.sweep.failures) + " self-reciprocity violations");

    if (rep.cls.found) {
        Rng rng(opts.search.seed, 0xFA11);
        rep.fallback_min_on_s2 = std::numeric_limits<double>::infinity();
        std::vector<std::array<cplx, 3>> s2dirs;
        for (std::size_t i : rep.cls.s2) {
            if (lines[i].at_infinity()) continue;
            rep.fallback_min_on_s2 =
                std::min(rep.fallback_min_on_s2, fallback_min_on_line(*pl.map, rep.infinity.fallback_row, lines[i], rng));
            s2dirs.push_back(lines[i].direction());
        }
        if (rep.fallback_min_on_s2 <= 1e-6)
            rep.findings.push_back("cubic fallback vanishes on an S2 line: extension not covered");
        std::vector<std::array<cplx, 3>> ind;
        for (const auto& ip : rep.infinity.indetermination) ind.push_back(ip.direction);
        rep.indetermination_match = match_directions(ind, s2dirs);
        if (!ind.empty() && rep.indetermination_match > 1e-6)
            rep.findings.push_back("indetermination points differ from the S2 directions at infinity");
    }
    return rep;
}

}  // namespace gsing
