#pragma once

// Exact rational numbers and sparse multivariate polynomials over Q.
//
// Polynomials live over a fixed global variable universe (see Var). Every
// polynomial carries the set of variables it is declared over; arithmetic
// takes the union. Terms are kept in graded-lexicographic order with
// w > x > y > z > o1 > o2 > o3 > v1 > v2 > v3 > s > t > a > b > c > d, so the
// leading term is the one of highest total degree and, among those, the one
// with the largest exponent on the earliest variable (x^3 before x^2 y).

#include <gmpxx.h>

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsing/error.hpp"

namespace gsing {

using Rat = mpq_class;
using BigInt = mpz_class;

/// Parses "num", "-num" or "num/den" into a canonical rational.
Rat parse_rat(std::string_view text);
/// "num" when the denominator is one, "num/den" otherwise.
std::string to_string(const Rat& q);

enum class Var : std::uint8_t { w, x, y, z, o1, o2, o3, v1, v2, v3, s, t, a, b, c, d };
inline constexpr std::size_t kVarCount = 16;

std::string_view var_name(Var v);
std::optional<Var> var_from_name(std::string_view name);

/// Bit set over the variable universe.
class VarSet {
public:
    constexpr VarSet() = default;
    constexpr VarSet(std::initializer_list<Var> vars) {
        for (Var v : vars) bits_ |= bit(v);
    }
    constexpr bool contains(Var v) const { return (bits_ & bit(v)) != 0; }
    constexpr VarSet operator|(VarSet o) const { return from_bits(bits_ | o.bits_); }
    constexpr bool operator==(const VarSet&) const = default;
    constexpr bool subset_of(VarSet o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr bool empty() const { return bits_ == 0; }
    std::vector<Var> list() const;
    constexpr std::uint32_t bits() const { return bits_; }

    static constexpr VarSet from_bits(std::uint32_t b) {
        VarSet s;
        s.bits_ = b;
        return s;
    }

private:
    static constexpr std::uint32_t bit(Var v) { return 1u << static_cast<unsigned>(v); }
    std::uint32_t bits_ = 0;
};

inline constexpr VarSet kPositionVars{Var::x, Var::y, Var::z};
inline constexpr VarSet kTwistVars{Var::o1, Var::o2, Var::o3, Var::v1, Var::v2, Var::v3};

struct Monomial {
    std::array<std::uint8_t, kVarCount> exp{};

    static Monomial of(Var v, unsigned e = 1) {
        Monomial m;
        m.exp[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(e);
        return m;
    }
    unsigned degree() const;
    unsigned degree_in(VarSet vars) const;
    unsigned operator[](Var v) const { return exp[static_cast<std::size_t>(v)]; }
    VarSet support() const;
    Monomial operator*(const Monomial& o) const;
    bool operator==(const Monomial&) const = default;
};

/// Strict "a comes before b" in descending graded-lex order.
struct GrlexDescending {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

class MultiPoly {
public:
    using Terms = std::map<Monomial, Rat, GrlexDescending>;

    MultiPoly() = default;
    explicit MultiPoly(VarSet vars) : vars_(vars) {}
    MultiPoly(const Rat& c, VarSet vars = {});
    MultiPoly(int c) : MultiPoly(Rat(c)) {}

    static MultiPoly variable(Var v);
    static MultiPoly monomial(const Rat& c, const Monomial& m);

    const Terms& terms() const { return terms_; }
    VarSet vars() const { return vars_; }
    /// Widens the declared variable set; terms are unchanged.
    MultiPoly& declare(VarSet vars) {
        vars_ = vars_ | vars;
        return *this;
    }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    std::size_t size() const { return terms_.size(); }
    Rat coeff(const Monomial& m) const;
    /// Total degree, -1 for the zero polynomial.
    int degree() const;
    int degree_in(VarSet vars) const;
    const Monomial& leading_monomial() const;
    const Rat& leading_coeff() const;

    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    MultiPoly& operator*=(const MultiPoly& o);
    MultiPoly& operator*=(const Rat& c);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(MultiPoly a, const Rat& c) { return a *= c; }
    friend MultiPoly operator*(const Rat& c, MultiPoly a) { return a *= c; }
    MultiPoly operator-() const;
    /// Equality of terms; the declared variable sets are ignored.
    bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }

    MultiPoly pow(unsigned e) const;
    MultiPoly derivative(Var v) const;
    /// Replaces variable v by the polynomial g everywhere.
    MultiPoly substitute(Var v, const MultiPoly& g) const;
    MultiPoly substitute(Var v, const Rat& value) const;
    /// Exact division by the monomial m; nullopt if some term is not divisible.
    std::optional<MultiPoly> divide_by(const Monomial& m) const;

    /// Sum of terms of total degree exactly k in `vars`.
    MultiPoly graded_part(VarSet vars, unsigned k) const;
    /// Multiplies each term by w^(d - deg term). Requires d >= degree().
    MultiPoly homogenize(Var w, unsigned d) const;
    /// Divides by the rational content and makes the leading coefficient
    /// positive. Throws on the zero polynomial.
    MultiPoly normalize_projective() const;
    /// Positive rational c with f / c having coprime integer coefficients.
    Rat content() const;

    /// Exact evaluation at a full assignment (unused slots are ignored).
    Rat evaluate(const std::array<Rat, kVarCount>& point) const;
    double evaluate(const std::array<double, kVarCount>& point) const;
    /// Sum over terms of |c| * |monomial(point)|: the natural scale of f at a point.
    double magnitude(const std::array<double, kVarCount>& point) const;

    std::string to_string() const;
    /// Reads to_string output; products may also be implied ("80x^3-107yx^2").
    static MultiPoly parse(std::string_view text);

private:
    void add_term(const Monomial& m, const Rat& c);
    VarSet vars_;
    Terms terms_;
};

/// Convenience: an assignment of the position variables (x, y, z).
template <class T>
std::array<T, kVarCount> position_point(const T& x, const T& y, const T& z, const T& w = T(1)) {
    std::array<T, kVarCount> p{};
    p[static_cast<std::size_t>(Var::w)] = w;
    p[static_cast<std::size_t>(Var::x)] = x;
    p[static_cast<std::size_t>(Var::y)] = y;
    p[static_cast<std::size_t>(Var::z)] = z;
    return p;
}

/// Row-major rectangular matrix of polynomials.
class PolyMatrix {
public:
    PolyMatrix(std::size_t rows, std::size_t cols);
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    MultiPoly& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const MultiPoly& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    VarSet vars() const;
    /// Submatrix on the given (sorted) rows and columns.
    PolyMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;

private:
    std::size_t rows_, cols_;
    std::vector<MultiPoly> entries_;
};

/// Determinant by Laplace expansion over column subsets (memoized).
MultiPoly determinant(const PolyMatrix& m);
/// 6x6 determinant through the generalized Laplace expansion along the first
/// three columns: a signed sum over the 20 row triples of products of 3x3 minors.
MultiPoly det_laplace3(const PolyMatrix& m);
/// (-1)^(i+j) times the minor obtained by deleting row i and column j (0-based).
MultiPoly cofactor(const PolyMatrix& m, std::size_t i, std::size_t j);

/// Dense rational matrix for the small exact linear algebra in this project.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
    static QMatrix identity(std::size_t n);
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    QMatrix transpose() const;
    friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
    bool operator==(const QMatrix&) const = default;

    Rat determinant() const;
    std::size_t rank() const;
    /// Reduced row echelon form; returns the pivot columns.
    std::vector<std::size_t> rref_in_place();
    /// Basis of the right nullspace, one column per basis vector.
    QMatrix nullspace() const;
    /// Solves A x = b for square nonsingular A.
    std::vector<Rat> solve(const std::vector<Rat>& b) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rat> a_;
};

/// Rational to floating conversions. Double rounding goes through GMP.
inline double to_double(const Rat& q) { return q.get_d(); }

/// All 720 permutations of {0..5} with their signatures, in lexicographic order.
struct SignedPermutation {
    std::array<std::uint8_t, 6> p;
    int sign;
};
const std::vector<SignedPermutation>& permutations6();

}  // namespace gsing
