#pragma once

#include <span>
#include <vector>

#include "ndde/vec3.hpp"

namespace ndde {

// Input constants in units c = e = m_e = 1.
inline constexpr double kHbar = 137.035999;               // 1 / fine-structure constant
inline constexpr double kProtonElectronMassRatio = 1836.15267;

struct SlitConfig {
  double a = 1.0e5;          // slit separation
  double m_scattered = 1.0;  // m_3
  double m_e = 1.0;
  double v3 = 0.01;          // incoming speed |v_3|
  double mass_ratio = kProtonElectronMassRatio;
  int n_electrons_per_site = 1;
  double hbar = kHbar;

  double m_p() const { return mass_ratio * m_e; }
  // Throws ArgumentError on any violated precondition.
  void validate() const;
};

// Lightcone data of one partner j as seen from particle i.
struct PartnerState {
  double r_minus = 1.0;
  Vec3 n_minus{1.0, 0.0, 0.0};
  Vec3 v_minus;
  double r_plus = 1.0;
  Vec3 n_plus{1.0, 0.0, 0.0};
  Vec3 v_plus;
};

// Einstein-local four-momentum (gamma_i, P_i), e^2/(2c) = 1/2 per half-term.
struct LocalMomentum {
  double gamma = 0.0;
  Vec3 P;
};

LocalMomentum local_momentum(double mass, const Vec3& velocity, std::span<const PartnerState> partners);

// A velocity discontinuity of particle i with the partner data before and after it.
struct MomentumEvent {
  double mass = 1.0;
  Vec3 v_pre;
  Vec3 v_post;
  std::vector<PartnerState> partners_pre;
  std::vector<PartnerState> partners_post;
};

struct BalanceResidual {
  double dgamma = 0.0;
  Vec3 dP;
};

// post-minus-pre of (gamma, P); zero for an admissible discontinuity.
BalanceResidual balance_residual(const MomentumEvent& event);

// L = |v1-| / (m3 |v3| (1 - n31 . v1-)), using (1 - n-.v-) ~ (1 + n+.v+) and |v1-| ~ |v1+|.
double closest_approach_L(const SlitConfig& config, const Vec3& v1_minus, const Vec3& n31);

// Same estimate with both half-terms kept separately (no symmetry assumptions).
double closest_approach_L_exact(const SlitConfig& config, const Vec3& v1_minus, const Vec3& n31_minus,
                                const Vec3& v1_plus, const Vec3& n31_plus);

// c / (c - n.v1-) = (sqrt(2) m_p/m_e)^(2/3).
double recoil_factor(double mass_ratio);

struct DeBroglieEstimate {
  double lambda_db = 0.0;         // (sqrt2 m_p/m_e)^(2/3) / (m3 |v3|)
  double recoil_factor = 0.0;
  double h_over_mv = 0.0;         // 2 pi hbar / (m3 |v3|)
  double ratio_to_h_over_mv = 0.0;
};

DeBroglieEstimate de_broglie_length(const SlitConfig& config);

struct IsotopeCheck {
  double lhs = 0.0;  // w(n1, n2) with hbar scaled for a doubled nuclear mass
  double rhs = 0.0;  // w(2 n1, 2 n2) at the original hbar
};

// Hydrogen line frequency w = m_e e^4 / (2 hbar^3) (1/n1^2 - 1/n2^2).
double line_frequency(double hbar, int n1, int n2, double m_e = 1.0);

IsotopeCheck isotope_scaling_check(int n1, int n2, const SlitConfig& config = {});

// a = hbar / (m v).
double slit_separation_estimate(double m, double v, double hbar = kHbar);

struct BraggDirection {
  int n = 0;
  double theta_rad = 0.0;
  double theta_deg = 0.0;
};

// Far-zone resonance a sin(theta) = n L for |n| <= n_max, n = 0 always present.
std::vector<BraggDirection> bragg_directions(double a, double L, int n_max);

struct DoubleSlitReport {
  double L = 0.0;  // closest-approach length with the recoil closure for v1-
  double recoil_factor = 0.0;
  double lambda_db = 0.0;
  double ratio_to_h_over_mv = 0.0;
  std::vector<BraggDirection> bragg;
};

DoubleSlitReport run_double_slit(const SlitConfig& config, int n_max);

}  // namespace ndde
