#pragma once

#include <span>

#include "ndde/lightcone.hpp"
#include "ndde/trajectory.hpp"

namespace ndde {

// Far (1/r, acceleration) part of the Lienard-Wiechert fields. With c = 1 and
// source charge q (the formulas reduce to the electron form for q = -1):
//   E+- = q (n/r) x [(n +- v) x a] / (1 +- n.v)^3
//   B+- = +-q (n/r) x [a / (1 +- n.v)^2 -+ (n.a) v / (1 +- n.v)^3]
struct FarField {
  Vec3 E;
  Vec3 B;
  bool on_breakpoint = false;  // causal-side limit of a double-valued field
};

// Fields from the Lienard-Wiechert velocity/acceleration formulas.
FarField far_fields_pm(const LightconeHit& hit, double charge, Branch branch);
FarField far_fields_pm(const PiecewiseTrajectory& traj, const Vec3& x, double t, Branch branch);

// d^2/dt^2 x_k(t_dev(t)) = a tdot^2 + v tddot with the far-field chain rule
// (n held fixed: tddot = -+ tdot^3 (n.a)).
Vec3 observed_acceleration(const LightconeHit& hit, Branch branch);

// Fields from B+- = -+q... written through the observed acceleration:
//   B+- = +-q (n/r) x d2x/dt2,  E+- = +-n x B+-.
FarField far_fields_simple(const LightconeHit& hit, double charge, Branch branch);
FarField far_fields_simple(const PiecewiseTrajectory& traj, const Vec3& x, double t, Branch branch);

// Advanced, retarded and semi-sum fields of one source at (x, t).
struct FieldSample {
  Vec3 E_plus, E_minus, B_plus, B_minus;
  Vec3 E, B;  // E = (E+ + E-)/2, B = (B+ + B-)/2
  Vec3 n_plus, n_minus;
  bool flagged = false;  // either lightcone point sits on a knot
};

FieldSample semi_sum_fields(const PiecewiseTrajectory& source, const Vec3& x, double t);

// Force m_k x_k'' = q_k (E + v_k x B) on charge k from the semi-sum far fields
// of every other trajectory. `side` picks the one-sided velocity of charge k.
Vec3 lorentz_rhs(std::size_t k, std::span<const PiecewiseTrajectory> trajectories, double t,
                 Side side = Side::right);

// Low-velocity far-field sum over partners j != k and both branches:
//   sum q_k q_j (n +- w v_k)/r x [n x d2x_j/dt2],
// w = 1 keeps the velocity terms (neutral form), w = 0 drops them.
Vec3 lowvel_rhs_3body(std::size_t k, std::span<const PiecewiseTrajectory> trajectories, double t,
                      bool with_velocity_terms);

}  // namespace ndde
