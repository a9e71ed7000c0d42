#include "gsing/numeric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace gsing {

Rat rat_from_double(double x) {
    if (!std::isfinite(x)) fail(ErrorKind::domain, "non-finite value has no rational representation");
    Rat q(x);  // exact: GMP converts the binary value
    return q;
}

namespace {

template <class C>
std::vector<cplx> companion_roots(std::vector<C> coeffs) {
    while (!coeffs.empty() && coeffs.back() == C(0)) coeffs.pop_back();
    if (coeffs.size() <= 1) return {};
    const int n = static_cast<int>(coeffs.size()) - 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    cplx lead = coeffs[static_cast<std::size_t>(n)];
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -cplx(coeffs[static_cast<std::size_t>(i)]) / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + n);
    for (auto& r : roots) {
        for (int it = 0; it < 3; ++it) {
            cplx p = 0, dp = 0;
            for (int k = n; k >= 0; --k) {
                dp = dp * r + p;
                p = p * r + cplx(coeffs[static_cast<std::size_t>(k)]);
            }
            if (std::abs(dp) == 0) break;
            cplx step = p / dp;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            r -= step;
        }
    }
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

}  // namespace

std::vector<cplx> poly_roots(std::vector<double> coeffs) { return companion_roots(std::move(coeffs)); }
std::vector<cplx> poly_roots(std::vector<cplx> coeffs) { return companion_roots(std::move(coeffs)); }

std::vector<double> real_roots(const std::vector<double>& coeffs, double imag_tol) {
    std::vector<double> out;
    for (cplx r : poly_roots(coeffs))
        if (std::abs(r.imag()) <= imag_tol * (1 + std::abs(r))) out.push_back(r.real());
    return out;
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 of (seed, stream) so neighbouring streams are decorrelated
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    eng_.seed(z);
}

// Distributions are written out by hand so sample streams are identical
// across standard library implementations.
double Rng::uniform(double lo, double hi) {
    double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double Rng::normal() {
    double u1 = uniform(0, 1), u2 = uniform(0, 1);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
}

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(eng_() % span);
}

Rat Rng::rational(std::int64_t max_num, std::int64_t max_den) {
    Rat q(BigInt(std::to_string(integer(-max_num, max_num))), BigInt(std::to_string(integer(1, max_den))));
    q.canonicalize();
    return q;
}

namespace {

template <class Real>
BigInt floor_int(const Real& x) {
    std::string f = Real(boost::multiprecision::floor(x)).str(0, std::ios_base::fixed);
    return BigInt(f.substr(0, f.find('.')));
}

template <class Real>
Rationalized rationalize_impl(const Real& x, double tol, const BigInt& max_den) {
    using boost::multiprecision::abs;
    Rationalized out;
    const Real limit = Real(tol) * std::max(Real(1), Real(abs(x)));
    // convergents h/k
    BigInt h_prev = 0, k_prev = 1, h = 1, k = 0;
    Real rem = x;
    for (int iter = 0; iter < 400; ++iter) {
        BigInt a = floor_int(rem);
        BigInt h_new = a * h + h_prev, k_new = a * k + k_prev;
        if (k_new > max_den) break;
        h_prev = h;
        k_prev = k;
        h = h_new;
        k = k_new;
        Rat cand(h, k);
        cand.canonicalize();
        Real err = abs(x - rat_to<Real>(cand));
        if (err <= limit) {
            out.ok = true;
            out.value = cand;
            out.error = static_cast<double>(err);
            return out;
        }
        Real frac = rem - Real(a.get_str());
        if (frac == 0) break;
        rem = 1 / frac;
    }
    return out;
}

}  // namespace

Rationalized rationalize(const Quad& x, double tol, const BigInt& max_den) { return rationalize_impl(x, tol, max_den); }
Rationalized rationalize(const Hp& x, double tol, const BigInt& max_den) { return rationalize_impl(x, tol, max_den); }

}  // namespace gsing
