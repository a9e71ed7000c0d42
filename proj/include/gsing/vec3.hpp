#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "gsing/exactpoly.hpp"

namespace gsing {

/// Three-vector over any ring-like scalar (Rat, MultiPoly, double, complex).
template <class T>
struct Vec3 {
    std::array<T, 3> v{};

    Vec3() = default;
    Vec3(T a, T b, T c) : v{std::move(a), std::move(b), std::move(c)} {}

    T& operator[](std::size_t i) { return v[i]; }
    const T& operator[](std::size_t i) const { return v[i]; }

    Vec3& operator+=(const Vec3& o) {
        for (std::size_t i = 0; i < 3; ++i) v[i] += o.v[i];
        return *this;
    }
    Vec3& operator-=(const Vec3& o) {
        for (std::size_t i = 0; i < 3; ++i) v[i] -= o.v[i];
        return *this;
    }
    friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend Vec3 operator*(const T& s, const Vec3& a) { return {T(s * a[0]), T(s * a[1]), T(s * a[2])}; }
    Vec3 operator-() const { return {T(-v[0]), T(-v[1]), T(-v[2])}; }
    bool operator==(const Vec3&) const = default;

    template <class U>
    Vec3<U> cast() const {
        return {U(v[0]), U(v[1]), U(v[2])};
    }
};

using Vec3Q = Vec3<Rat>;
using Vec3d = Vec3<double>;
using Vec3c = Vec3<std::complex<double>>;

template <class T>
T dot(const Vec3<T>& a, const Vec3<T>& b) {
    return T(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
}

template <class T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
    return {T(a[1] * b[2] - a[2] * b[1]), T(a[2] * b[0] - a[0] * b[2]), T(a[0] * b[1] - a[1] * b[0])};
}

/// Mixed product [a, b, c] = det(a | b | c) = a . (b x c).
template <class T>
T mixed(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
    return dot(a, cross(b, c));
}

inline double norm(const Vec3d& a) { return std::sqrt(dot(a, a)); }
inline double norm(const Vec3c& a) {
    return std::sqrt(std::norm(a[0]) + std::norm(a[1]) + std::norm(a[2]));
}

inline Vec3d to_double(const Vec3Q& a) { return {a[0].get_d(), a[1].get_d(), a[2].get_d()}; }

/// Embeds a rational vector as constant polynomials.
inline Vec3<MultiPoly> to_poly(const Vec3Q& a) { return {MultiPoly(a[0]), MultiPoly(a[1]), MultiPoly(a[2])}; }

inline Vec3<MultiPoly> position_vector() {
    return {MultiPoly::variable(Var::x), MultiPoly::variable(Var::y), MultiPoly::variable(Var::z)};
}

/// Dense 3x3 matrix, row-major.
template <class T>
struct Mat3 {
    std::array<std::array<T, 3>, 3> a{};

    T& operator()(std::size_t i, std::size_t j) { return a[i][j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a[i][j]; }

    static Mat3 identity() {
        Mat3 m;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m.a[i][j] = T(i == j ? 1 : 0);
        return m;
    }
    Mat3 transpose() const {
        Mat3 t;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) t.a[i][j] = a[j][i];
        return t;
    }
    friend Mat3 operator*(const Mat3& x, const Mat3& y) {
        Mat3 r;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                T s = T(0);
                for (std::size_t k = 0; k < 3; ++k) s += x.a[i][k] * y.a[k][j];
                r.a[i][j] = s;
            }
        return r;
    }
    friend Vec3<T> operator*(const Mat3& m, const Vec3<T>& v) {
        Vec3<T> r;
        for (std::size_t i = 0; i < 3; ++i) r[i] = T(m.a[i][0] * v[0] + m.a[i][1] * v[1] + m.a[i][2] * v[2]);
        return r;
    }
    T determinant() const {
        Vec3<T> r0{a[0][0], a[0][1], a[0][2]}, r1{a[1][0], a[1][1], a[1][2]}, r2{a[2][0], a[2][1], a[2][2]};
        return mixed(r0, r1, r2);
    }
    T trace() const { return T(a[0][0] + a[1][1] + a[2][2]); }
    bool operator==(const Mat3&) const = default;
};

using Mat3Q = Mat3<Rat>;

}  // namespace gsing
