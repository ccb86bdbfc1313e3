#include "ndde/slit_model.hpp"

#include <cmath>
#include <numbers>

#include "ndde/errors.hpp"

namespace ndde {

namespace {
constexpr double kHalfCoupling = 0.5;  // e^2 / (2c)
}

void SlitConfig::validate() const {
  if (!(a > 0.0) || !std::isfinite(a)) throw ArgumentError("slit separation a must be positive");
  if (!(m_scattered > 0.0) || !(m_e > 0.0)) throw ArgumentError("masses must be positive");
  if (!(v3 > 0.0 && v3 < 1.0)) throw ArgumentError("v3 must lie in (0, 1)");
  if (!(mass_ratio > 0.0) || !std::isfinite(mass_ratio)) throw ArgumentError("mass_ratio must be positive");
  if (n_electrons_per_site < 1) throw ArgumentError("n_electrons_per_site must be a positive integer");
  if (!(hbar > 0.0)) throw ArgumentError("hbar must be positive");
}

LocalMomentum local_momentum(double mass, const Vec3& velocity, std::span<const PartnerState> partners) {
  const double v2 = norm2(velocity);
  if (!(v2 < 1.0)) throw ArgumentError("|v_i| must be below 1");
  const double lorentz = 1.0 / std::sqrt(1.0 - v2);
  LocalMomentum m{mass * lorentz, velocity * (mass * lorentz)};
  for (const PartnerState& p : partners) {
    if (!(p.r_minus > 0.0) || !(p.r_plus > 0.0)) throw SingularityError("partner lightcone distance r = 0");
    const double wm = kHalfCoupling / (p.r_minus * (1.0 - dot(p.n_minus, p.v_minus)));
    const double wp = kHalfCoupling / (p.r_plus * (1.0 + dot(p.n_plus, p.v_plus)));
    m.gamma -= wm + wp;
    m.P -= p.v_minus * wm + p.v_plus * wp;
  }
  return m;
}

BalanceResidual balance_residual(const MomentumEvent& e) {
  const LocalMomentum pre = local_momentum(e.mass, e.v_pre, e.partners_pre);
  const LocalMomentum post = local_momentum(e.mass, e.v_post, e.partners_post);
  return {post.gamma - pre.gamma, post.P - pre.P};
}

double closest_approach_L(const SlitConfig& c, const Vec3& v1_minus, const Vec3& n31) {
  if (!(norm2(v1_minus) < 1.0)) throw ArgumentError("|v1-| must be below 1");
  const double denom = c.m_scattered * c.v3 * (1.0 - dot(n31, v1_minus));
  if (!(denom > 0.0)) throw ArgumentError("closest-approach denominator must be positive");
  return norm(v1_minus) / denom;
}

double closest_approach_L_exact(const SlitConfig& c, const Vec3& v1_minus, const Vec3& n31_minus,
                                const Vec3& v1_plus, const Vec3& n31_plus) {
  if (!(norm2(v1_minus) < 1.0) || !(norm2(v1_plus) < 1.0)) throw ArgumentError("|v1| must be below 1");
  const double dm = 1.0 - dot(n31_minus, v1_minus);
  const double dp = 1.0 + dot(n31_plus, v1_plus);
  if (!(dm > 0.0) || !(dp > 0.0)) throw ArgumentError("closest-approach denominator must be positive");
  return (0.5 * norm(v1_minus) / dm + 0.5 * norm(v1_plus) / dp) / (c.m_scattered * c.v3);
}

double recoil_factor(double mass_ratio) {
  if (!(mass_ratio > 0.0)) throw ArgumentError("mass_ratio must be positive");
  return std::pow(std::numbers::sqrt2 * mass_ratio, 2.0 / 3.0);
}

DeBroglieEstimate de_broglie_length(const SlitConfig& c) {
  c.validate();
  // n electrons sharing the recoil of an n-fold nucleus see the same ratio.
  const double n = static_cast<double>(c.n_electrons_per_site);
  const double effective_ratio = (n * c.m_p()) / (n * c.m_e);
  DeBroglieEstimate d;
  d.recoil_factor = recoil_factor(effective_ratio);
  const double mv = c.m_scattered * c.v3;
  d.lambda_db = d.recoil_factor / mv;
  d.h_over_mv = 2.0 * std::numbers::pi * c.hbar / mv;
  d.ratio_to_h_over_mv = d.h_over_mv / d.lambda_db;
  return d;
}

double line_frequency(double hbar, int n1, int n2, double m_e) {
  if (n1 < 1 || n2 < n1) throw ArgumentError("line frequency needs 1 <= n1 <= n2");
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  return m_e / (2.0 * hbar * hbar * hbar) * (1.0 / (a * a) - 1.0 / (b * b));
}

IsotopeCheck isotope_scaling_check(int n1, int n2, const SlitConfig& c) {
  if (n1 < 1 || n2 < n1) throw ArgumentError("isotope check needs n2 >= n1 >= 1");
  // hbar ~ (m_p/m_e)^(2/3): doubling the nuclear mass scales hbar by 2^(2/3).
  const double scale = recoil_factor(2.0 * c.mass_ratio) / recoil_factor(c.mass_ratio);
  return {line_frequency(c.hbar * scale, n1, n2, c.m_e), line_frequency(c.hbar, 2 * n1, 2 * n2, c.m_e)};
}

double slit_separation_estimate(double m, double v, double hbar) {
  if (!(m > 0.0) || !(v > 0.0)) throw ArgumentError("slit separation estimate needs m, v > 0");
  return hbar / (m * v);
}

std::vector<BraggDirection> bragg_directions(double a, double L, int n_max) {
  if (!(a > 0.0) || !(L > 0.0)) throw ArgumentError("a and L must be positive");
  if (L > a) throw ArgumentError("chain period L must not exceed the slit separation a");
  if (n_max < 0) throw ArgumentError("n_max must be non-negative");
  std::vector<BraggDirection> out;
  for (int n = -n_max; n <= n_max; ++n) {
    const double s = static_cast<double>(n) * L / a;
    if (std::abs(s) > 1.0) continue;
    const double th = std::asin(s);
    out.push_back({n, th, th * 180.0 / std::numbers::pi});
  }
  return out;
}

DoubleSlitReport run_double_slit(const SlitConfig& c, int n_max) {
  const DeBroglieEstimate db = de_broglie_length(c);
  DoubleSlitReport r;
  r.recoil_factor = db.recoil_factor;
  r.lambda_db = db.lambda_db;
  r.ratio_to_h_over_mv = db.ratio_to_h_over_mv;
  // Bound electron moving straight at charge 3 with c/(c - |v1-|) equal to the recoil factor.
  const Vec3 v1{1.0 - 1.0 / db.recoil_factor, 0.0, 0.0};
  r.L = closest_approach_L(c, v1, Vec3{1.0, 0.0, 0.0});
  r.bragg = bragg_directions(c.a, r.L, n_max);
  return r;
}

}  // namespace ndde
