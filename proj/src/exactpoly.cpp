#include "gsing/exactpoly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gsing {

namespace {

constexpr std::array<std::string_view, kVarCount> kVarNames = {
    "w", "x", "y", "z", "o1", "o2", "o3", "v1", "v2", "v3", "s", "t", "a", "b", "c", "d"};

bool is_integer_text(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

}  // namespace

Rat parse_rat(std::string_view text) {
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den) || den[0] == '-' || den[0] == '+')
        fail(ErrorKind::input, "malformed rational '" + std::string(text) + "'");
    std::string n(num[0] == '+' ? num.substr(1) : num);
    BigInt d{std::string(den)};
    if (d == 0) fail(ErrorKind::input, "zero denominator in '" + std::string(text) + "'");
    Rat q(BigInt(n), d);
    q.canonicalize();
    return q;
}

std::string to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string_view var_name(Var v) { return kVarNames[static_cast<std::size_t>(v)]; }

std::optional<Var> var_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kVarCount; ++i)
        if (kVarNames[i] == name) return static_cast<Var>(i);
    return std::nullopt;
}

std::vector<Var> VarSet::list() const {
    std::vector<Var> out;
    for (std::size_t i = 0; i < kVarCount; ++i)
        if (bits_ & (1u << i)) out.push_back(static_cast<Var>(i));
    return out;
}

// ---------------------------------------------------------------- Monomial

unsigned Monomial::degree() const {
    unsigned d = 0;
    for (auto e : exp) d += e;
    return d;
}

unsigned Monomial::degree_in(VarSet vars) const {
    unsigned d = 0;
    for (std::size_t i = 0; i < kVarCount; ++i)
        if (vars.contains(static_cast<Var>(i))) d += exp[i];
    return d;
}

VarSet Monomial::support() const {
    std::uint32_t b = 0;
    for (std::size_t i = 0; i < kVarCount; ++i)
        if (exp[i]) b |= 1u << i;
    return VarSet::from_bits(b);
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial m;
    for (std::size_t i = 0; i < kVarCount; ++i) {
        unsigned e = unsigned(exp[i]) + o.exp[i];
        if (e > 255) fail(ErrorKind::domain, "monomial exponent overflow");
        m.exp[i] = static_cast<std::uint8_t>(e);
    }
    return m;
}

bool GrlexDescending::operator()(const Monomial& a, const Monomial& b) const {
    unsigned da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    for (std::size_t i = 0; i < kVarCount; ++i)
        if (a.exp[i] != b.exp[i]) return a.exp[i] > b.exp[i];
    return false;
}

// ---------------------------------------------------------------- MultiPoly

MultiPoly::MultiPoly(const Rat& c, VarSet vars) : vars_(vars) {
    if (c != 0) terms_.emplace(Monomial{}, c);
}

MultiPoly MultiPoly::variable(Var v) { return monomial(Rat(1), Monomial::of(v)); }

MultiPoly MultiPoly::monomial(const Rat& c, const Monomial& m) {
    MultiPoly p(m.support());
    if (c != 0) p.terms_.emplace(m, c);
    return p;
}

bool MultiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

Rat MultiPoly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rat(0) : it->second;
}

int MultiPoly::degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_.begin()->first.degree()); }

int MultiPoly::degree_in(VarSet vars) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(m.degree_in(vars)));
    return d;
}

const Monomial& MultiPoly::leading_monomial() const {
    if (terms_.empty()) fail(ErrorKind::domain, "leading monomial of the zero polynomial");
    return terms_.begin()->first;
}

const Rat& MultiPoly::leading_coeff() const {
    if (terms_.empty()) fail(ErrorKind::domain, "leading coefficient of the zero polynomial");
    return terms_.begin()->second;
}

void MultiPoly::add_term(const Monomial& m, const Rat& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    vars_ = vars_ | o.vars_;
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    vars_ = vars_ | o.vars_;
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r(a.vars_ | b.vars_);
    Rat prod;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            prod = ca * cb;
            r.add_term(ma * mb, prod);
        }
    return r;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly& MultiPoly::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly r(Rat(1), vars_);
    for (unsigned i = 0; i < e; ++i) r *= *this;
    return r;
}

MultiPoly MultiPoly::derivative(Var v) const {
    MultiPoly r(vars_);
    auto idx = static_cast<std::size_t>(v);
    for (const auto& [m, c] : terms_) {
        if (m.exp[idx] == 0) continue;
        Monomial md = m;
        md.exp[idx]--;
        r.add_term(md, c * m.exp[idx]);
    }
    return r;
}

MultiPoly MultiPoly::substitute(Var v, const MultiPoly& g) const {
    auto idx = static_cast<std::size_t>(v);
    unsigned maxe = 0;
    for (const auto& [m, c] : terms_) maxe = std::max<unsigned>(maxe, m.exp[idx]);
    std::vector<MultiPoly> powers{MultiPoly(Rat(1))};
    for (unsigned e = 1; e <= maxe; ++e) powers.push_back(powers.back() * g);

    MultiPoly r(VarSet::from_bits(vars_.bits() & ~VarSet{v}.bits()) | g.vars());
    for (const auto& [m, c] : terms_) {
        Monomial rest = m;
        rest.exp[idx] = 0;
        r += monomial(c, rest) * powers[m.exp[idx]];
    }
    return r;
}

MultiPoly MultiPoly::substitute(Var v, const Rat& value) const { return substitute(v, MultiPoly(value)); }

std::optional<MultiPoly> MultiPoly::divide_by(const Monomial& d) const {
    MultiPoly r(vars_);
    for (const auto& [m, c] : terms_) {
        Monomial q;
        for (std::size_t i = 0; i < kVarCount; ++i) {
            if (m.exp[i] < d.exp[i]) return std::nullopt;
            q.exp[i] = static_cast<std::uint8_t>(m.exp[i] - d.exp[i]);
        }
        r.terms_.emplace(q, c);
    }
    return r;
}

MultiPoly MultiPoly::graded_part(VarSet vars, unsigned k) const {
    MultiPoly r(vars_);
    for (const auto& [m, c] : terms_)
        if (m.degree_in(vars) == k) r.terms_.emplace(m, c);
    return r;
}

MultiPoly MultiPoly::homogenize(Var w, unsigned d) const {
    if (degree() > static_cast<int>(d))
        fail(ErrorKind::domain, "homogenize: target degree " + std::to_string(d) + " below polynomial degree " +
                                    std::to_string(degree()));
    MultiPoly r(vars_ | VarSet{w});
    auto idx = static_cast<std::size_t>(w);
    for (const auto& [m, c] : terms_) {
        Monomial h = m;
        h.exp[idx] = static_cast<std::uint8_t>(h.exp[idx] + d - m.degree());
        r.add_term(h, c);
    }
    return r;
}

Rat MultiPoly::content() const {
    if (terms_.empty()) fail(ErrorKind::domain, "content of the zero polynomial");
    BigInt g = 0, l = 1;
    for (const auto& [m, c] : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rat r(g, l);
    r.canonicalize();
    return r;
}

MultiPoly MultiPoly::normalize_projective() const {
    if (terms_.empty()) fail(ErrorKind::domain, "cannot normalize the zero polynomial");
    Rat scale = 1 / content();
    if (leading_coeff() < 0) scale = -scale;
    return *this * scale;
}

Rat MultiPoly::evaluate(const std::array<Rat, kVarCount>& point) const {
    Rat sum = 0, term;
    for (const auto& [m, c] : terms_) {
        term = c;
        for (std::size_t i = 0; i < kVarCount; ++i)
            for (unsigned e = 0; e < m.exp[i]; ++e) term *= point[i];
        sum += term;
    }
    return sum;
}

double MultiPoly::evaluate(const std::array<double, kVarCount>& point) const {
    double sum = 0;
    for (const auto& [m, c] : terms_) {
        double term = c.get_d();
        for (std::size_t i = 0; i < kVarCount; ++i)
            if (m.exp[i]) term *= std::pow(point[i], m.exp[i]);
        sum += term;
    }
    return sum;
}

double MultiPoly::magnitude(const std::array<double, kVarCount>& point) const {
    double sum = 0;
    for (const auto& [m, c] : terms_) {
        double term = std::abs(c.get_d());
        for (std::size_t i = 0; i < kVarCount; ++i)
            if (m.exp[i]) term *= std::pow(std::abs(point[i]), m.exp[i]);
        sum += term;
    }
    return sum;
}

// Text form: "c * x^i * y^j + c2 * ..." with signed leading coefficients, e.g.
// "24 * z^3 - 80 * x^3 + 3/2 * x * y - 7". Variables print in universe order.
std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (first) {
            out << gsing::to_string(c);
        } else {
            out << (c < 0 ? " - " : " + ") << gsing::to_string(Rat(abs(c)));
        }
        first = false;
        for (std::size_t i = 0; i < kVarCount; ++i) {
            if (!m.exp[i]) continue;
            out << " * " << kVarNames[i];
            if (m.exp[i] > 1) out << '^' << unsigned(m.exp[i]);
        }
    }
    return out.str();
}

namespace {

class PolyParser {
public:
    explicit PolyParser(std::string_view s) : s_(s) {}

    MultiPoly parse() {
        MultiPoly result;
        skip_ws();
        bool negate = false;
        if (peek() == '-') {
            negate = true;
            ++pos_;
        }
        for (;;) {
            MultiPoly term = parse_term();
            if (negate) term = -term;
            result += term;
            skip_ws();
            if (pos_ == s_.size()) break;
            char op = s_[pos_];
            if (op != '+' && op != '-') error("expected '+' or '-'");
            negate = op == '-';
            ++pos_;
        }
        return result;
    }

private:
    MultiPoly parse_term() {
        skip_ws();
        Rat coef = 1;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
            coef = parse_rat(s_.substr(start, pos_ - start));
            skip_ws();
            if (peek() == '*')
                ++pos_;
            else if (!std::isalpha(static_cast<unsigned char>(peek())))
                return MultiPoly(coef);
        }
        Monomial m;
        for (;;) {
            skip_ws();
            // one letter plus optional digits, so "yx^2" reads as y*x^2
            std::size_t start = pos_;
            if (std::isalpha(static_cast<unsigned char>(peek()))) ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            auto name = s_.substr(start, pos_ - start);
            auto v = var_from_name(name);
            if (!v) error("unknown variable '" + std::string(name) + "'");
            unsigned e = 1;
            skip_ws();
            if (peek() == '^') {
                ++pos_;
                skip_ws();
                std::size_t es = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                if (es == pos_) error("expected exponent");
                e = static_cast<unsigned>(std::stoul(std::string(s_.substr(es, pos_ - es))));
            }
            m = m * Monomial::of(*v, e);
            skip_ws();
            if (peek() == '*')
                ++pos_;
            else if (!std::isalpha(static_cast<unsigned char>(peek())))
                break;
        }
        return MultiPoly::monomial(coef, m);
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[noreturn]] void error(const std::string& msg) const {
        fail(ErrorKind::input, "polynomial parse error at offset " + std::to_string(pos_) + ": " + msg);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

MultiPoly MultiPoly::parse(std::string_view text) {
    std::string_view trimmed = text;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
    if (trimmed == "0") return MultiPoly();
    return PolyParser(text).parse();
}

// ---------------------------------------------------------------- PolyMatrix

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

VarSet PolyMatrix::vars() const {
    VarSet v;
    for (const auto& e : entries_) v = v | e.vars();
    return v;
}

PolyMatrix PolyMatrix::submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
    PolyMatrix s(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
    return s;
}

MultiPoly determinant(const PolyMatrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) fail(ErrorKind::domain, "determinant of a non-square matrix");
    if (n == 0) return MultiPoly(Rat(1));
    if (n > 20) fail(ErrorKind::domain, "determinant: matrix too large for Laplace expansion");
    // minors[mask] = det of rows [n - popcount(mask), n) against the columns in mask.
    std::vector<MultiPoly> minors(std::size_t(1) << n);
    minors[0] = MultiPoly(Rat(1));
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        const std::size_t k = static_cast<std::size_t>(__builtin_popcount(mask));
        const std::size_t row = n - k;
        MultiPoly acc(m.vars());
        int position = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (1u << j))) continue;
            const auto& entry = m(row, j);
            if (!entry.is_zero()) {
                const auto& sub = minors[mask & ~(1u << j)];
                if (!sub.is_zero()) {
                    if (position % 2 == 0)
                        acc += entry * sub;
                    else
                        acc -= entry * sub;
                }
            }
            ++position;
        }
        minors[mask] = std::move(acc);
    }
    return minors[(1u << n) - 1];
}

namespace {

MultiPoly det3(const PolyMatrix& m, const std::array<std::size_t, 3>& r, std::size_t c0) {
    auto e = [&](std::size_t i, std::size_t j) -> const MultiPoly& { return m(r[i], c0 + j); };
    return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
           e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

}  // namespace

MultiPoly det_laplace3(const PolyMatrix& m) {
    if (m.rows() != 6 || m.cols() != 6) fail(ErrorKind::domain, "det_laplace3: matrix is not 6x6");
    MultiPoly sum(m.vars());
    for (std::size_t i1 = 0; i1 < 6; ++i1)
        for (std::size_t i2 = i1 + 1; i2 < 6; ++i2)
            for (std::size_t i3 = i2 + 1; i3 < 6; ++i3) {
                std::array<std::size_t, 3> top{i1, i2, i3}, rest{};
                std::size_t k = 0;
                for (std::size_t j = 0; j < 6; ++j)
                    if (j != i1 && j != i2 && j != i3) rest[k++] = j;
                // 1-based sign (-1)^(i1+i2+i3 + 1+2+3); the column part is even.
                bool negative = ((i1 + i2 + i3 + 3) % 2) != 0;
                MultiPoly term = det3(m, top, 0) * det3(m, rest, 3);
                if (negative)
                    sum -= term;
                else
                    sum += term;
            }
    return sum;
}

MultiPoly cofactor(const PolyMatrix& m, std::size_t i, std::size_t j) {
    if (m.rows() != m.cols()) fail(ErrorKind::domain, "cofactor of a non-square matrix");
    if (i >= m.rows() || j >= m.cols()) fail(ErrorKind::domain, "cofactor index out of range");
    std::vector<std::size_t> rows, cols;
    for (std::size_t k = 0; k < m.rows(); ++k) {
        if (k != i) rows.push_back(k);
        if (k != j) cols.push_back(k);
    }
    MultiPoly minor = determinant(m.submatrix(rows, cols));
    return ((i + j) % 2) ? -minor : minor;
}

// ---------------------------------------------------------------- QMatrix

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

QMatrix QMatrix::transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::domain, "matrix product dimension mismatch");
    QMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += a(i, k) * b(k, j);
        }
    return r;
}

std::vector<std::size_t> QMatrix::rref_in_place() {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
        std::size_t p = row;
        while (p < rows_ && (*this)(p, col) == 0) ++p;
        if (p == rows_) continue;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(row, j), (*this)(p, j));
        Rat inv = 1 / (*this)(row, col);
        for (std::size_t j = 0; j < cols_; ++j) (*this)(row, j) *= inv;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == row || (*this)(i, col) == 0) continue;
            Rat f = (*this)(i, col);
            for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) -= f * (*this)(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t QMatrix::rank() const {
    QMatrix c = *this;
    return c.rref_in_place().size();
}

Rat QMatrix::determinant() const {
    if (rows_ != cols_) fail(ErrorKind::domain, "determinant of a non-square matrix");
    QMatrix c = *this;
    Rat det = 1;
    for (std::size_t col = 0; col < cols_; ++col) {
        std::size_t p = col;
        while (p < rows_ && c(p, col) == 0) ++p;
        if (p == rows_) return 0;
        if (p != col) {
            for (std::size_t j = 0; j < cols_; ++j) std::swap(c(col, j), c(p, j));
            det = -det;
        }
        det *= c(col, col);
        for (std::size_t i = col + 1; i < rows_; ++i) {
            if (c(i, col) == 0) continue;
            Rat f = c(i, col) / c(col, col);
            for (std::size_t j = col; j < cols_; ++j) c(i, j) -= f * c(col, j);
        }
    }
    return det;
}

QMatrix QMatrix::nullspace() const {
    QMatrix r = *this;
    auto pivots = r.rref_in_place();
    std::vector<std::size_t> free;
    for (std::size_t j = 0, k = 0; j < cols_; ++j) {
        if (k < pivots.size() && pivots[k] == j)
            ++k;
        else
            free.push_back(j);
    }
    QMatrix basis(cols_, free.size());
    for (std::size_t f = 0; f < free.size(); ++f) {
        basis(free[f], f) = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) basis(pivots[k], f) = -r(k, free[f]);
    }
    return basis;
}

std::vector<Rat> QMatrix::solve(const std::vector<Rat>& b) const {
    if (rows_ != cols_ || b.size() != rows_) fail(ErrorKind::domain, "solve: dimension mismatch");
    QMatrix aug(rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
        aug(i, cols_) = b[i];
    }
    auto pivots = aug.rref_in_place();
    if (pivots.size() < rows_ || pivots.back() >= cols_) fail(ErrorKind::domain, "solve: singular system");
    std::vector<Rat> x(rows_);
    for (std::size_t i = 0; i < rows_; ++i) x[i] = aug(i, cols_);
    return x;
}

// ---------------------------------------------------------------- permutations

const std::vector<SignedPermutation>& permutations6() {
    static const std::vector<SignedPermutation> perms = [] {
        std::vector<SignedPermutation> out;
        std::array<std::uint8_t, 6> p{0, 1, 2, 3, 4, 5};
        do {
            int inversions = 0;
            for (int i = 0; i < 6; ++i)
                for (int j = i + 1; j < 6; ++j)
                    if (p[i] > p[j]) ++inversions;
            out.push_back({p, inversions % 2 ? -1 : 1});
        } while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    return perms;
}

}  // namespace gsing
