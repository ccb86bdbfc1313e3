#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace ndde {

// Truncated univariate Taylor series c[0] + c[1] s + ... + c[N] s^N.
// Arithmetic is exact up to the truncation order, so evaluating a formula on
// Taylor<N> arguments propagates derivatives through it.
template <std::size_t N>
struct Taylor {
  std::array<double, N + 1> c{};

  constexpr Taylor() = default;
  constexpr Taylor(double v) { c[0] = v; }  // NOLINT(google-explicit-constructor)

  static constexpr std::size_t order = N;

  static constexpr Taylor variable(double at) {
    Taylor t(at);
    if constexpr (N >= 1) t.c[1] = 1.0;
    return t;
  }

  constexpr double value() const { return c[0]; }

  // k-th derivative at the expansion point.
  constexpr double derivative(std::size_t k) const {
    double f = 1.0;
    for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
    return c[k] * f;
  }

  constexpr Taylor derivative_series() const {
    Taylor d;
    for (std::size_t k = 0; k < N; ++k) d.c[k] = static_cast<double>(k + 1) * c[k + 1];
    return d;
  }

  constexpr Taylor& operator+=(const Taylor& o) {
    for (std::size_t k = 0; k <= N; ++k) c[k] += o.c[k];
    return *this;
  }
  constexpr Taylor& operator-=(const Taylor& o) {
    for (std::size_t k = 0; k <= N; ++k) c[k] -= o.c[k];
    return *this;
  }
  constexpr Taylor& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  constexpr Taylor& operator/=(double s) {
    for (auto& v : c) v /= s;
    return *this;
  }
  constexpr Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
  constexpr Taylor& operator/=(const Taylor& o) { return *this = *this / o; }

  friend constexpr Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend constexpr Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend constexpr Taylor operator-(Taylor a) {
    for (auto& v : a.c) v = -v;
    return a;
  }
  friend constexpr Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (std::size_t i = 0; i <= N; ++i)
      for (std::size_t j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  friend constexpr Taylor operator/(const Taylor& a, const Taylor& b) {
    Taylor q;
    for (std::size_t k = 0; k <= N; ++k) {
      double s = a.c[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c[j] * q.c[k - j];
      q.c[k] = s / b.c[0];
    }
    return q;
  }
  friend constexpr Taylor operator+(Taylor a, double s) { return a += Taylor(s); }
  friend constexpr Taylor operator+(double s, Taylor a) { return a += Taylor(s); }
  friend constexpr Taylor operator-(Taylor a, double s) { return a -= Taylor(s); }
  friend constexpr Taylor operator-(double s, const Taylor& a) { return Taylor(s) - a; }
  friend constexpr Taylor operator*(Taylor a, double s) { return a *= s; }
  friend constexpr Taylor operator*(double s, Taylor a) { return a *= s; }
  friend constexpr Taylor operator/(Taylor a, double s) { return a /= s; }
  friend constexpr Taylor operator/(double s, const Taylor& a) { return Taylor(s) / a; }
};

template <std::size_t N>
Taylor<N> exp(const Taylor<N>& a) {
  Taylor<N> r;
  r.c[0] = std::exp(a.c[0]);
  for (std::size_t k = 1; k <= N; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a.c[j] * r.c[k - j];
    r.c[k] = s / static_cast<double>(k);
  }
  return r;
}

namespace detail {
template <std::size_t N>
void sincos(const Taylor<N>& a, Taylor<N>& s, Taylor<N>& co) {
  s = Taylor<N>();
  co = Taylor<N>();
  s.c[0] = std::sin(a.c[0]);
  co.c[0] = std::cos(a.c[0]);
  for (std::size_t k = 1; k <= N; ++k) {
    double ss = 0.0;
    double cc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      const double ja = static_cast<double>(j) * a.c[j];
      ss += ja * co.c[k - j];
      cc -= ja * s.c[k - j];
    }
    s.c[k] = ss / static_cast<double>(k);
    co.c[k] = cc / static_cast<double>(k);
  }
}
}  // namespace detail

template <std::size_t N>
Taylor<N> sin(const Taylor<N>& a) {
  Taylor<N> s, c;
  detail::sincos(a, s, c);
  return s;
}

template <std::size_t N>
Taylor<N> cos(const Taylor<N>& a) {
  Taylor<N> s, c;
  detail::sincos(a, s, c);
  return c;
}

template <std::size_t N>
Taylor<N> sqrt(const Taylor<N>& a) {
  Taylor<N> r;
  r.c[0] = std::sqrt(a.c[0]);
  for (std::size_t k = 1; k <= N; ++k) {
    double s = a.c[k];
    for (std::size_t j = 1; j < k; ++j) s -= r.c[j] * r.c[k - j];
    r.c[k] = s / (2.0 * r.c[0]);
  }
  return r;
}

// Derivative jets used for breaking-point analysis carry derivatives up to 4.
using Jet = Taylor<4>;

}  // namespace ndde
