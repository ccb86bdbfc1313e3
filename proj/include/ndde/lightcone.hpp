#pragma once

#include "ndde/trajectory.hpp"
#include "ndde/vec3.hpp"

namespace ndde {

// retarded: t_dev = t - |x_k(t_dev) - x|;  advanced: t_dev = t + |x_k(t_dev) - x|.
enum class Branch { retarded, advanced };

// +1 for advanced, -1 for retarded: the upper/lower sign in t_dev = t +- r.
constexpr double branch_sign(Branch b) { return b == Branch::advanced ? 1.0 : -1.0; }

// Causal side at a knot: left limit for retarded, right limit for advanced.
constexpr Side causal_side(Branch b) { return b == Branch::advanced ? Side::right : Side::left; }

struct LightconeHit {
  double t_dev = 0.0;
  double r = 0.0;
  Vec3 n;  // unit vector from x_k(t_dev) to the observation point
  Vec3 position;
  Vec3 v_dev;
  Vec3 a_dev;
  double dtdev_dt = 1.0;
  bool on_breakpoint = false;  // t_dev sits on a knot; kinematics are the causal-side limits
  int iterations = 0;
};

struct LightconeOptions {
  double fixed_point_tol = 1e-6;
  double newton_tol = 1e-12;  // relative to (1 + |t|)
  int max_iterations = 200;
};

LightconeHit solve_lightcone(const PiecewiseTrajectory& traj, const Vec3& x, double t, Branch branch,
                             const LightconeOptions& options = {});

// 1 / (1 +- n . v_dev). Throws SingularityError when the denominator drops
// below 1 - v_max of the source trajectory (passed in as v_max).
double deviating_derivative(const LightconeHit& hit, Branch branch, double v_max = kDefaultVmax);

// Residual t_dev - t -+ r of a hit; zero for an exact solution.
double lightcone_residual(const PiecewiseTrajectory& traj, const Vec3& x, double t, Branch branch,
                          const LightconeHit& hit);

}  // namespace ndde
