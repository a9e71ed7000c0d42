#include "gsing/quadric.hpp"

#include <cmath>

namespace gsing {

namespace {

const std::array<Var, 6> kTwistOrder{Var::o1, Var::o2, Var::o3, Var::v1, Var::v2, Var::v3};

TwistQ concat(const Vec3Q& omega, const Vec3Q& v) { return {omega[0], omega[1], omega[2], v[0], v[1], v[2]}; }

Rat abs_rat(const Rat& q) { return q < 0 ? Rat(-q) : q; }

}  // namespace

DependencyCoefficients dependency_coefficients(const Architecture& arch,
                                               std::optional<std::array<std::size_t, 3>> forced) {
    const auto& A = arch.base;
    if (arch.base_rank < 3) fail(ErrorKind::degenerate, "degenerate base (coplanar with origin)");
    DependencyCoefficients dc;
    if (forced) {
        auto f = *forced;
        std::sort(f.begin(), f.end());
        if (f[0] < 1 || f[2] > 5 || f[0] == f[1] || f[1] == f[2])
            fail(ErrorKind::input, "basis triple must be three distinct indices among A_2..A_6");
        dc.basis = f;
        dc.mixed = mixed(A[f[0]], A[f[1]], A[f[2]]);
        if (dc.mixed == 0) fail(ErrorKind::domain, "forced basis triple is linearly dependent");
    } else {
        bool found = false;
        for (std::size_t i = 1; i <= 5; ++i)
            for (std::size_t j = i + 1; j <= 5; ++j)
                for (std::size_t k = j + 1; k <= 5; ++k) {
                    Rat m = mixed(A[i], A[j], A[k]);
                    if (m != 0 && (!found || abs_rat(m) > abs_rat(dc.mixed))) {
                        dc.basis = {i, j, k};
                        dc.mixed = m;
                        found = true;
                    }
                }
        if (!found) fail(ErrorKind::degenerate, "degenerate base (coplanar with origin)");
    }
    std::size_t n = 0;
    for (std::size_t i = 1; i <= 5; ++i)
        if (std::find(dc.basis.begin(), dc.basis.end(), i) == dc.basis.end()) dc.others[n++] = i;

    QMatrix M(3, 3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) M(r, c) = A[dc.basis[c]][r];
    for (std::size_t o = 0; o < 2; ++o) {
        const auto& target = A[dc.others[o]];
        auto x = M.solve({target[0], target[1], target[2]});
        auto& dst = o == 0 ? dc.alpha : dc.beta;
        for (std::size_t k = 0; k < 3; ++k) dst[k] = x[k];
    }
    return dc;
}

Vec3Q ell_identity_check(const Vec3Q& omega, const std::array<Vec3Q, 3>& t) {
    Vec3Q sum;
    for (std::size_t a = 0; a < 3; ++a) {
        const auto& b = t[(a + 1) % 3];
        const auto& c = t[(a + 2) % 3];
        Rat l = mixed(omega, b, c);
        sum += l * cross(omega, t[a]);
    }
    return sum;
}

TwistQ linear_form_coeffs(const MultiPoly& f) {
    TwistQ c;
    for (std::size_t k = 0; k < 6; ++k) c[k] = f.coeff(Monomial::of(kTwistOrder[k]));
    return c;
}

QMatrix quadratic_form_matrix(const MultiPoly& f) {
    QMatrix m(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i; j < 6; ++j) {
            if (i == j) {
                m(i, i) = f.coeff(Monomial::of(kTwistOrder[i], 2));
            } else {
                Rat h = f.coeff(Monomial::of(kTwistOrder[i]) * Monomial::of(kTwistOrder[j])) / 2;
                m(i, j) = h;
                m(j, i) = h;
            }
        }
    return m;
}

MultiPoly linear_form_poly(const TwistQ& c) {
    MultiPoly f(kTwistVars);
    for (std::size_t k = 0; k < 6; ++k) f += MultiPoly::monomial(c[k], Monomial::of(kTwistOrder[k]));
    return f;
}

MultiPoly quadratic_form_poly(const QMatrix& m) {
    MultiPoly f(kTwistVars);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            f += MultiPoly::monomial(m(i, j), Monomial::of(kTwistOrder[i]) * Monomial::of(kTwistOrder[j]));
    return f;
}

QuadricModel quadric_equations(const Architecture& arch, const Orientation& orient, const TwistMap& map,
                               std::optional<std::array<std::size_t, 3>> forced) {
    QuadricModel q;
    q.dep = dependency_coefficients(arch, forced);
    const auto& A = arch.base;
    auto C = limb_offsets(arch, orient);
    const auto& b = q.dep.basis;

    auto linear = [&](std::size_t m, const std::array<Rat, 3>& coef) {
        Vec3Q v = C[m], w = cross(A[m], C[m]);
        for (std::size_t k = 0; k < 3; ++k) {
            v -= coef[k] * C[b[k]];
            w -= coef[k] * cross(A[b[k]], C[b[k]]);
        }
        return concat(w, v);
    };
    TwistQ raw1 = linear(q.dep.others[0], q.dep.alpha);
    TwistQ raw2 = linear(q.dep.others[1], q.dep.beta);

    QMatrix Q(6, 6);
    for (std::size_t a = 0; a < 3; ++a) {
        const auto& i = b[a];
        const auto& j = b[(a + 1) % 3];
        const auto& k = b[(a + 2) % 3];
        TwistQ ell = concat(cross(A[j], A[k]), Vec3Q{});
        TwistQ lam = concat(cross(A[i], C[i]), C[i]);
        for (std::size_t r = 0; r < 6; ++r)
            for (std::size_t c = 0; c < 6; ++c) Q(r, c) += (ell[r] * lam[c] + lam[r] * ell[c]) / 2;
    }

    auto normalize = [&](MultiPoly raw, MultiPoly& out) -> std::optional<Rat> {
        if (raw.is_zero()) {
            q.generic = false;
            out = MultiPoly(kTwistVars);
            return std::nullopt;
        }
        out = raw.normalize_projective().declare(kTwistVars);
        const auto& lm = out.leading_monomial();
        return Rat(out.leading_coeff() / raw.coeff(lm));
    };
    auto scale_lin = [](TwistQ c, const std::optional<Rat>& s) {
        if (s)
            for (auto& x : c) x *= *s;
        return c;
    };
    q.lin1 = scale_lin(raw1, normalize(linear_form_poly(raw1), q.lin1_poly));
    q.lin2 = scale_lin(raw2, normalize(linear_form_poly(raw2), q.lin2_poly));
    auto sq = normalize(quadratic_form_poly(Q), q.quad_poly);
    if (sq)
        for (std::size_t r = 0; r < 6; ++r)
            for (std::size_t c = 0; c < 6; ++c) Q(r, c) *= *sq;
    q.quad = Q;

    auto base = map.rec_exact(Vec3Q{});
    if (!base) fail(ErrorKind::domain, "rank < 5 at P = 0: no base point for Q");
    q.base_point = *base;
    auto res = quadric_membership_exact(q, q.base_point);
    if (res[0] != 0 || res[1] != 0 || res[2] != 0)
        fail(ErrorKind::consistency, "Rec(0) does not satisfy the quadric equations");
    return q;
}

namespace {

QMatrix stack_rows(const std::array<TwistQ, 2>& a, const std::array<TwistQ, 2>& b) {
    QMatrix m(4, 6);
    for (std::size_t c = 0; c < 6; ++c) {
        m(0, c) = a[0][c];
        m(1, c) = a[1][c];
        m(2, c) = b[0][c];
        m(3, c) = b[1][c];
    }
    return m;
}

QMatrix rows_of(const std::array<TwistQ, 2>& a) {
    QMatrix m(2, 6);
    for (std::size_t c = 0; c < 6; ++c) {
        m(0, c) = a[0][c];
        m(1, c) = a[1][c];
    }
    return m;
}

QMatrix restrict_form(const QMatrix& N, const QMatrix& Q) { return N.transpose() * Q * N; }

bool proportional(const QMatrix& a, const QMatrix& b) {
    // a = c b for some nonzero c: compare all 2x2 cross products
    std::optional<Rat> ratio;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            bool za = a(i, j) == 0, zb = b(i, j) == 0;
            if (za != zb) return false;
            if (za) continue;
            Rat r = a(i, j) / b(i, j);
            if (ratio && *ratio != r) return false;
            ratio = r;
        }
    return ratio.has_value();
}

}  // namespace

bool same_linear_span(const std::array<TwistQ, 2>& a, const std::array<TwistQ, 2>& b) {
    return rows_of(a).rank() == 2 && rows_of(b).rank() == 2 && stack_rows(a, b).rank() == 2;
}

bool same_quadric_modulo_span(const std::array<TwistQ, 2>& lin, const QMatrix& qa, const QMatrix& qb) {
    QMatrix N = rows_of(lin).nullspace();
    if (N.cols() != 4) return false;
    return proportional(restrict_form(N, qa), restrict_form(N, qb));
}

bool same_quadric(const QuadricModel& a, const QuadricModel& b) {
    return same_linear_span({a.lin1, a.lin2}, {b.lin1, b.lin2}) &&
           same_quadric_modulo_span({a.lin1, a.lin2}, a.quad, b.quad);
}

template <class T>
MembershipResidual quadric_membership(const QuadricModel& model, const std::array<T, 6>& t) {
    bool zero = true;
    for (const auto& x : t) zero = zero && std::abs(x) == 0;
    if (zero) fail(ErrorKind::domain, "zero twist");
    MembershipResidual r;
    auto lin = [&](const TwistQ& c, std::size_t slot) {
        T sum = T(0);
        double mag = 0;
        for (std::size_t k = 0; k < 6; ++k) {
            double ck = c[k].get_d();
            sum += ck * t[k];
            mag += std::abs(ck) * std::abs(t[k]);
        }
        r.raw[slot] = std::abs(sum);
        r.relative[slot] = mag > 0 ? r.raw[slot] / mag : 0;
    };
    lin(model.lin1, 0);
    lin(model.lin2, 1);
    T sum = T(0);
    double mag = 0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            double qij = model.quad(i, j).get_d();
            if (qij == 0) continue;
            sum += qij * t[i] * t[j];
            mag += std::abs(qij) * std::abs(t[i]) * std::abs(t[j]);
        }
    r.raw[2] = std::abs(sum);
    r.relative[2] = mag > 0 ? r.raw[2] / mag : 0;
    return r;
}

template MembershipResidual quadric_membership(const QuadricModel&, const std::array<double, 6>&);
template MembershipResidual quadric_membership(const QuadricModel&, const std::array<cplx, 6>&);

std::array<Rat, 3> quadric_membership_exact(const QuadricModel& model, const TwistQ& t) {
    if (std::all_of(t.begin(), t.end(), [](const Rat& x) { return x == 0; })) fail(ErrorKind::domain, "zero twist");
    std::array<Rat, 3> r;
    for (std::size_t k = 0; k < 6; ++k) {
        r[0] += model.lin1[k] * t[k];
        r[1] += model.lin2[k] * t[k];
    }
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) r[2] += model.quad(i, j) * t[i] * t[j];
    return r;
}

// ---------------------------------------------------------------- parametrization

QuadricParametrization::QuadricParametrization(const QuadricModel& model) {
    N_ = rows_of({model.lin1, model.lin2}).nullspace();
    if (N_.cols() != 4) fail(ErrorKind::degenerate, "Q degenerate or base point on vertex");
    S_ = restrict_form(N_, model.quad);

    // base point coordinates: N has an identity block on the free columns
    QMatrix NtN = N_.transpose() * N_;
    std::vector<Rat> rhs(4);
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t r = 0; r < 6; ++r) rhs[c] += N_(r, c) * model.base_point[r];
    auto u = NtN.solve(rhs);
    for (std::size_t c = 0; c < 4; ++c) u0_[c] = u[c];

    bool smooth = false;
    for (std::size_t i = 0; i < 4; ++i) {
        Rat g = 0;
        for (std::size_t j = 0; j < 4; ++j) g += S_(i, j) * u0_[j];
        smooth = smooth || g != 0;
    }
    if (!smooth) fail(ErrorKind::degenerate, "Q degenerate or base point on vertex");

    k_ = 0;
    for (std::size_t i = 1; i < 4; ++i)
        if (abs_rat(u0_[i]) > abs_rat(u0_[k_])) k_ = i;
    std::size_t n = 0;
    for (std::size_t i = 0; i < 4; ++i)
        if (i != k_) dir_[n++] = i;

    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 4; ++c) Nd_[r][c] = N_(r, c).get_d();
    for (std::size_t r = 0; r < 4; ++r) {
        u0d_[r] = u0_[r].get_d();
        for (std::size_t c = 0; c < 4; ++c) Sd_[r][c] = S_(r, c).get_d();
    }
}

std::array<Rat, 4> QuadricParametrization::direction(const Rat& s, const Rat& t) const {
    std::array<Rat, 4> d;
    d[dir_[0]] = 1;
    d[dir_[1]] = s;
    d[dir_[2]] = t;
    return d;
}

std::optional<TwistQ> QuadricParametrization::evaluate(const Rat& s, const Rat& t) const {
    auto d = direction(s, t);
    Rat qd = 0, bd = 0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            qd += S_(i, j) * d[i] * d[j];
            bd += S_(i, j) * u0_[i] * d[j];
        }
    std::array<Rat, 4> u;
    bool nonzero = false;
    for (std::size_t i = 0; i < 4; ++i) {
        u[i] = qd * u0_[i] - 2 * bd * d[i];
        nonzero = nonzero || u[i] != 0;
    }
    if (!nonzero) return std::nullopt;
    TwistQ out;
    for (std::size_t r = 0; r < 6; ++r)
        for (std::size_t c = 0; c < 4; ++c) out[r] += N_(r, c) * u[c];
    return out;
}

std::array<double, 6> QuadricParametrization::evaluate(double s, double t) const {
    std::array<double, 4> d{};
    d[dir_[0]] = 1;
    d[dir_[1]] = s;
    d[dir_[2]] = t;
    double qd = 0, bd = 0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            qd += Sd_[i][j] * d[i] * d[j];
            bd += Sd_[i][j] * u0d_[i] * d[j];
        }
    std::array<double, 6> out{};
    for (std::size_t c = 0; c < 4; ++c) {
        double u = qd * u0d_[c] - 2 * bd * d[c];
        for (std::size_t r = 0; r < 6; ++r) out[r] += Nd_[r][c] * u;
    }
    return out;
}

std::array<MultiPoly, 6> QuadricParametrization::polynomials() const {
    const VarSet st{Var::s, Var::t};
    std::array<MultiPoly, 4> d{MultiPoly(st), MultiPoly(st), MultiPoly(st), MultiPoly(st)};
    d[dir_[0]] = MultiPoly(Rat(1), st);
    d[dir_[1]] = MultiPoly::variable(Var::s);
    d[dir_[2]] = MultiPoly::variable(Var::t);
    MultiPoly qd(st), bd(st);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            if (S_(i, j) == 0) continue;
            qd += S_(i, j) * (d[i] * d[j]);
            bd += (S_(i, j) * u0_[i]) * d[j];
        }
    std::array<MultiPoly, 6> out;
    for (auto& o : out) o = MultiPoly(st);
    for (std::size_t c = 0; c < 4; ++c) {
        MultiPoly u = qd * u0_[c] - Rat(2) * (bd * d[c]);
        for (std::size_t r = 0; r < 6; ++r)
            if (N_(r, c) != 0) out[r] += u * N_(r, c);
    }
    return out;
}

std::optional<std::array<Rat, 2>> QuadricParametrization::inverse(const TwistQ& twist) const {
    QMatrix NtN = N_.transpose() * N_;
    std::vector<Rat> rhs(4);
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t r = 0; r < 6; ++r) rhs[c] += N_(r, c) * twist[r];
    auto u = NtN.solve(rhs);
    // direction from u0 to u, moved into the chart hyperplane u_k = 0
    std::array<Rat, 4> d;
    for (std::size_t i = 0; i < 4; ++i) d[i] = u[i] - (u[k_] / u0_[k_]) * u0_[i];
    if (d[dir_[0]] == 0) return std::nullopt;
    return std::array<Rat, 2>{Rat(d[dir_[1]] / d[dir_[0]]), Rat(d[dir_[2]] / d[dir_[0]])};
}

std::optional<Rat> QuadricParametrization::tangent_parameter(const Rat& s) const {
    // u0^T S d(s, t) = g_a + s g_b + t g_c = 0
    std::array<Rat, 4> g;
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t i = 0; i < 4; ++i) g[j] += u0_[i] * S_(i, j);
    if (g[dir_[2]] == 0) return std::nullopt;
    return Rat(-(g[dir_[0]] + s * g[dir_[1]]) / g[dir_[2]]);
}

}  // namespace gsing
