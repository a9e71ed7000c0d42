#pragma once

// Floating-point side of the toolkit: compiled polynomial evaluators, roots of
// univariate polynomials, deterministic random streams and rational
// reconstruction of floating values.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "gsing/exactpoly.hpp"

namespace gsing {

using Quad = boost::multiprecision::cpp_bin_float_quad;
using QuadC = boost::multiprecision::cpp_complex_quad;
/// Working precision of line polishing and orbit rationalization.
using Hp = boost::multiprecision::cpp_bin_float_100;
using HpC = boost::multiprecision::cpp_complex_100;
using cplx = std::complex<double>;

template <class Real>
Real rat_to(const Rat& q) {
    return Real(q.get_num().get_str()) / Real(q.get_den().get_str());
}
template <>
inline double rat_to<double>(const Rat& q) {
    return q.get_d();
}

/// Exact rational value of a finite double.
Rat rat_from_double(double x);

/// A polynomial frozen into floating coefficients for fast repeated
/// evaluation over Real or a complex type built on Real.
template <class Real>
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const MultiPoly& p) {
        vars_ = p.vars();
        for (const auto& [m, c] : p.terms()) {
            Term t{rat_to<Real>(c), m.exp};
            terms_.push_back(t);
            for (auto e : m.exp) max_exp_ = std::max<unsigned>(max_exp_, e);
            used_ = used_ | m.support();
        }
    }

    template <class T>
    T operator()(const std::array<T, kVarCount>& point) const {
        std::array<std::vector<T>, kVarCount> pw;
        for (Var v : used_.list()) {
            auto& p = pw[static_cast<std::size_t>(v)];
            p.resize(max_exp_ + 1);
            p[0] = T(1);
            for (unsigned k = 1; k <= max_exp_; ++k) p[k] = p[k - 1] * point[static_cast<std::size_t>(v)];
        }
        T sum = T(0);
        for (const auto& t : terms_) {
            T term = T(t.c);
            for (std::size_t i = 0; i < kVarCount; ++i)
                if (t.e[i]) term *= pw[i][t.e[i]];
            sum += term;
        }
        return sum;
    }

    /// Sum of |c| |m(point)|: the scale against which a value of this
    /// polynomial is judged to be zero.
    template <class T>
    Real magnitude(const std::array<T, kVarCount>& point) const {
        using std::abs;
        Real sum = 0;
        for (const auto& t : terms_) {
            Real term = abs(t.c);
            for (std::size_t i = 0; i < kVarCount; ++i)
                for (unsigned k = 0; k < t.e[i]; ++k) term *= Real(abs(point[i]));
            sum += term;
        }
        return sum;
    }

    bool empty() const { return terms_.empty(); }

private:
    struct Term {
        Real c;
        std::array<std::uint8_t, kVarCount> e;
    };
    std::vector<Term> terms_;
    VarSet vars_, used_;
    unsigned max_exp_ = 0;
};

/// Roots of sum_k c[k] t^k (coefficients low to high), via the companion
/// matrix followed by Newton polishing. Leading zero coefficients are dropped.
std::vector<cplx> poly_roots(std::vector<double> coeffs);
std::vector<cplx> poly_roots(std::vector<cplx> coeffs);

/// Real roots among poly_roots, with |Im| <= imag_tol * (1 + |root|).
std::vector<double> real_roots(const std::vector<double>& coeffs, double imag_tol = 1e-9);

/// Coefficients (low to high) of p(t) = f(origin + t * direction), for f of
/// degree <= 3 in (x, y, z): interpolation on four points is exact.
template <class Real, class T>
std::array<T, 4> cubic_along_line(const CompiledPoly<Real>& f, const std::array<T, 3>& origin,
                                  const std::array<T, 3>& direction) {
    std::array<T, 4> v;
    for (int k = 0; k < 4; ++k) {
        T t = T(k - 1);
        std::array<T, kVarCount> pt{};
        pt[0] = T(1);
        for (int i = 0; i < 3; ++i) pt[1 + i] = origin[i] + t * direction[i];
        v[k] = f(pt);
    }
    // p(-1)=v0, p(0)=v1, p(1)=v2, p(2)=v3
    T c0 = v[1];
    T c2 = (v[0] + v[2]) / T(2) - c0;
    T c3 = (v[3] - T(3) * v[2] + T(3) * v[1] - v[0]) / T(6);
    T c1 = v[2] - c0 - c2 - c3;
    return {c0, c1, c2, c3};
}

/// Deterministic random stream: every consumer derives its own stream from
/// (seed, stream id) so results do not depend on scheduling.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream = 0);
    double uniform(double lo, double hi);
    double normal();
    std::int64_t integer(std::int64_t lo, std::int64_t hi);
    /// Small-height random rational num/den with |num| <= max_num, 1 <= den <= max_den.
    Rat rational(std::int64_t max_num, std::int64_t max_den);
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

/// Continued-fraction reconstruction: the first convergent p/q with
/// |x - p/q| <= tol * max(1, |x|) and q <= max_den, if any.
struct Rationalized {
    bool ok = false;
    Rat value;
    double error = 0;  ///< |x - value|
};
Rationalized rationalize(const Quad& x, double tol, const BigInt& max_den);
Rationalized rationalize(const Hp& x, double tol, const BigInt& max_den);

}  // namespace gsing
