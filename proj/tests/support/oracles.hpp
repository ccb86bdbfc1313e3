#pragma once

// Independent reference computations used by the tests.

#include <cmath>
#include <utility>
#include <vector>

#include "ndde/vec3.hpp"

namespace oracle {

// Polynomial in s on one unit-delay interval, coefficients lowest order first.
using Poly = std::vector<double>;

inline double eval(const Poly& p, double s) {
  double v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * s + *it;
  return v;
}

inline Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(static_cast<double>(k) * p[k]);
  if (d.empty()) d.push_back(0.0);
  return d;
}

inline double derivative_at(Poly p, int order, double s) {
  for (int k = 0; k < order; ++k) p = derivative(p);
  return eval(p, s);
}

// Exact method of steps for y'(t) = a y(t-1), unit delay, polynomial history on
// [-1, 0] given in s = t + 1. Returns pieces for [-1,0], [0,1], ..., [n-1, n].
inline std::vector<Poly> retarded_steps(double a, const Poly& history, int n) {
  std::vector<Poly> pieces = {history};
  for (int i = 0; i < n; ++i) {
    const Poly& prev = pieces.back();
    Poly next(prev.size() + 1, 0.0);
    next[0] = eval(prev, 1.0);
    for (std::size_t k = 0; k < prev.size(); ++k) next[k + 1] = a * prev[k] / static_cast<double>(k + 1);
    pieces.push_back(next);
  }
  return pieces;
}

// Same for y'(t) = a y'(t-1).
inline std::vector<Poly> neutral_steps(double a, const Poly& history, int n) {
  std::vector<Poly> pieces = {history};
  for (int i = 0; i < n; ++i) {
    const Poly& prev = pieces.back();
    Poly next(prev.size(), 0.0);
    for (std::size_t k = 1; k < prev.size(); ++k) next[k] = a * prev[k];
    next[0] = eval(prev, 1.0);
    pieces.push_back(next);
  }
  return pieces;
}

// Jump of the order-th derivative at t = n (right piece minus left piece).
inline double jump_at(const std::vector<Poly>& pieces, int n, int order) {
  return derivative_at(pieces[static_cast<std::size_t>(n + 1)], order, 0.0) -
         derivative_at(pieces[static_cast<std::size_t>(n)], order, 1.0);
}

// Both lightcone times of a uniformly moving source x0 + v t seen from (x, t):
// |x - x0 - v s|^2 = (t - s)^2, returns (retarded, advanced).
inline std::pair<double, double> uniform_lightcone(const ndde::Vec3& x0, const ndde::Vec3& v, const ndde::Vec3& x,
                                                   double t) {
  const ndde::Vec3 d = x - x0;
  const double A = ndde::dot(v, v) - 1.0;
  const double B = 2.0 * (t - ndde::dot(d, v));
  const double C = ndde::dot(d, d) - t * t;
  const double disc = std::sqrt(B * B - 4.0 * A * C);
  const double r1 = (-B + disc) / (2.0 * A);
  const double r2 = (-B - disc) / (2.0 * A);
  return {std::min(r1, r2), std::max(r1, r2)};
}

// Radiation (acceleration) part of the Lienard-Wiechert fields, textbook form.
// n points from the source to the observer, r the distance at the source time.
struct Fields {
  ndde::Vec3 E, B;
};

inline Fields lw_retarded(double q, const ndde::Vec3& n, double r, const ndde::Vec3& v, const ndde::Vec3& a) {
  const double k = 1.0 - ndde::dot(n, v);
  const ndde::Vec3 E = q * ndde::cross(n, ndde::cross(n - v, a)) / (k * k * k * r);
  return {E, ndde::cross(n, E)};
}

// Time mirror of the retarded radiation field.
inline Fields lw_advanced(double q, const ndde::Vec3& n, double r, const ndde::Vec3& v, const ndde::Vec3& a) {
  const double k = 1.0 + ndde::dot(n, v);
  const ndde::Vec3 E = q * ndde::cross(n, ndde::cross(n + v, a)) / (k * k * k * r);
  return {E, -ndde::cross(n, E)};
}

}  // namespace oracle
