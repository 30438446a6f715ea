#pragma once

// Small fixed-dimension vector arithmetic used throughout the library.

#include <array>
#include <cmath>
#include <cstddef>

namespace swarmlab {

template <std::size_t D>
using Vec = std::array<double, D>;

template <std::size_t D>
constexpr Vec<D> zero_vec() {
    Vec<D> z{};
    return z;
}

template <std::size_t D>
inline Vec<D> operator+(const Vec<D>& a, const Vec<D>& b) {
    Vec<D> r;
    for (std::size_t i = 0; i < D; ++i) r[i] = a[i] + b[i];
    return r;
}

template <std::size_t D>
inline Vec<D> operator-(const Vec<D>& a, const Vec<D>& b) {
    Vec<D> r;
    for (std::size_t i = 0; i < D; ++i) r[i] = a[i] - b[i];
    return r;
}

template <std::size_t D>
inline Vec<D> operator-(const Vec<D>& a) {
    Vec<D> r;
    for (std::size_t i = 0; i < D; ++i) r[i] = -a[i];
    return r;
}

template <std::size_t D>
inline Vec<D> operator*(double s, const Vec<D>& a) {
    Vec<D> r;
    for (std::size_t i = 0; i < D; ++i) r[i] = s * a[i];
    return r;
}

template <std::size_t D>
inline Vec<D>& operator+=(Vec<D>& a, const Vec<D>& b) {
    for (std::size_t i = 0; i < D; ++i) a[i] += b[i];
    return a;
}

template <std::size_t D>
inline Vec<D>& operator-=(Vec<D>& a, const Vec<D>& b) {
    for (std::size_t i = 0; i < D; ++i) a[i] -= b[i];
    return a;
}

template <std::size_t D>
inline double dot(const Vec<D>& a, const Vec<D>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < D; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t D>
inline double norm2(const Vec<D>& a) {
    return dot(a, a);
}

template <std::size_t D>
inline double norm(const Vec<D>& a) {
    return std::sqrt(norm2(a));
}

template <std::size_t D>
inline double dist(const Vec<D>& a, const Vec<D>& b) {
    return norm(a - b);
}

// Returns a/|a|; caller guarantees a != 0.
template <std::size_t D>
inline Vec<D> normalized(const Vec<D>& a) {
    const double n = norm(a);
    Vec<D> r;
    for (std::size_t i = 0; i < D; ++i) r[i] = a[i] / n;
    return r;
}

inline double clamp(double x, double lo, double hi) {
    return x < lo ? lo : (x > hi ? hi : x);
}

} // namespace swarmlab
