#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "ndde/vec3.hpp"

namespace ndde::crystal {

using Complex = std::complex<double>;

// Direct basis (2 or 3 vectors) and its reciprocal, b_i . a_j = 2 pi delta_ij.
// A 2D lattice lives in the xy plane; the third direction is a unit z.
class Lattice {
 public:
  explicit Lattice(std::vector<Vec3> basis);

  static Lattice square(double spacing);
  static Lattice oblique(const Vec3& a1, const Vec3& a2);

  int dimension() const { return static_cast<int>(basis_.size()); }
  const std::vector<Vec3>& basis() const { return basis_; }
  const std::vector<Vec3>& reciprocal() const { return reciprocal_; }

  Vec3 site(int i, int j, int k = 0) const;
  Vec3 reciprocal_vector(int h, int k, int l = 0) const;
  // Nonzero reciprocal vectors with Miller indices in [-max_index, max_index].
  std::vector<Vec3> reciprocal_vectors(int max_index) const;

 private:
  std::vector<Vec3> basis_;
  std::vector<Vec3> reciprocal_;
};

struct FourierTerm {
  Vec3 G;
  Complex V;
};

// eps * sum_G V_G exp(i G.x) with V_{-G} = conj(V_G) over a finite set of G.
class FourierPotential {
 public:
  FourierPotential(std::vector<FourierTerm> terms, double epsilon);

  // The +-G0 pair with V_{G0} = v, V_{-G0} = conj(v).
  static FourierPotential single_pair(const Vec3& G0, Complex v, double epsilon);

  const std::vector<FourierTerm>& terms() const { return terms_; }
  double epsilon() const { return epsilon_; }

  // Real potential eps sum V e^{iG.x}; imaginary part is checked against round-off.
  double value(const Vec3& x) const;
  // -grad of the potential.
  Vec3 force(const Vec3& x) const;
  // Term with the least |G| (first of a +-pair with the lower index wins ties).
  const FourierTerm& least_modulus() const;
  // Time for the fastest spatial period at speed |p|.
  double shortest_period(double speed) const;

 private:
  std::vector<FourierTerm> terms_;
  double epsilon_;
};

double hamiltonian(const Vec3& p, const Vec3& x, const FourierPotential& pot);

struct GeneratingCoefficients {
  std::vector<FourierTerm> coefficients;  // (G, F_G) for non-resonant G
  std::vector<Vec3> resonant;             // G with |G.P| <= tol |G||P|
};

inline constexpr double kResonanceTol = 1e-9;

// F_G = +i V_G / (G.P).
GeneratingCoefficients generating_coefficients(const FourierPotential& pot, const Vec3& P,
                                               double tol = kResonanceTol);

// max_G |V_G + i (G.P) F_G| over the retained G.
double first_order_residual(const FourierPotential& pot, const Vec3& P, const std::vector<FourierTerm>& F);
double first_order_residual(const FourierPotential& pot, const Vec3& P);

std::vector<Vec3> resonance_set(const FourierPotential& pot, const Vec3& P, double tol);
std::vector<Vec3> resonance_set(const Lattice& lattice, const Vec3& P, double tol, int max_index = 3);

// New momentum P of the first-order transformation p = P + eps sum i G F_G(P) e^{iG.x}.
Vec3 transformed_momentum(const FourierPotential& pot, const Vec3& x, const Vec3& p);

struct Sample {
  double t = 0.0;
  Vec3 x;
  Vec3 p;
  double H = 0.0;
};

struct CrystalTrajectory {
  std::vector<Sample> samples;
  std::optional<double> failed_at;  // last good time if the state went non-finite
};

// Kick-drift-kick leapfrog. Samples every `sample_every` steps plus the end.
CrystalTrajectory integrate(const FourierPotential& pot, const Vec3& x0, const Vec3& p0, double T, double dt,
                            int sample_every = 1);

struct KickReport {
  Vec3 dP;
  Vec3 nearest_G;
  double alignment = 0.0;        // |cos(dP, nearest G)|
  double separatrix_bound = 0.0; // sqrt(4 eps |V_G0|)
  Vec3 estimate;                 // sqrt(4 eps |V_G0|) G0 / |G0|
};

KickReport momentum_kick(const CrystalTrajectory& trajectory, const FourierPotential& pot);

// Linearized pendulum frequency sqrt(2 eps |V_G0| |G0|^2) for the least-modulus pair.
double pendulum_frequency(const FourierPotential& pot);

// Max |x(t) - x0 - P t| over the samples, P the transformed momentum of (x0, p0).
double straight_line_deviation(const CrystalTrajectory& trajectory, const FourierPotential& pot);

// du = (L |u| / 2 pi) G.
Vec3 vonlaue_shift(double L, const Vec3& u, const Vec3& G);

// Largest |du_hat . dr_j - n L| over sites of an n_side x n_side patch
// (du_hat = du / |u|, n the nearest integer).
double vonlaue_delay_residual(double L, const Vec3& u, const Vec3& G, const Lattice& lattice, int n_side);

}  // namespace ndde::crystal
