#include "ndde/farfield.hpp"

#include "ndde/errors.hpp"

namespace ndde {

FarField far_fields_pm(const LightconeHit& hit, double charge, Branch branch) {
  const double sgn = branch_sign(branch);
  const Vec3& n = hit.n;
  const Vec3& v = hit.v_dev;
  const Vec3& a = hit.a_dev;
  const double kappa = 1.0 + sgn * dot(n, v);
  const double k2 = kappa * kappa;
  const double k3 = k2 * kappa;
  FarField f;
  f.E = charge * cross(n / hit.r, cross(n + sgn * v, a)) / k3;
  f.B = sgn * charge * cross(n / hit.r, a / k2 - sgn * dot(n, a) * v / k3);
  f.on_breakpoint = hit.on_breakpoint;
  return f;
}

FarField far_fields_pm(const PiecewiseTrajectory& traj, const Vec3& x, double t, Branch branch) {
  return far_fields_pm(solve_lightcone(traj, x, t, branch), traj.charge(), branch);
}

Vec3 observed_acceleration(const LightconeHit& hit, Branch branch) {
  const double sgn = branch_sign(branch);
  const double td = hit.dtdev_dt;
  const double tdd = -sgn * td * td * td * dot(hit.n, hit.a_dev);
  return hit.a_dev * (td * td) + hit.v_dev * tdd;
}

FarField far_fields_simple(const LightconeHit& hit, double charge, Branch branch) {
  const double sgn = branch_sign(branch);
  FarField f;
  f.B = sgn * charge * cross(hit.n / hit.r, observed_acceleration(hit, branch));
  f.E = sgn * cross(hit.n, f.B);
  f.on_breakpoint = hit.on_breakpoint;
  return f;
}

FarField far_fields_simple(const PiecewiseTrajectory& traj, const Vec3& x, double t, Branch branch) {
  return far_fields_simple(solve_lightcone(traj, x, t, branch), traj.charge(), branch);
}

FieldSample semi_sum_fields(const PiecewiseTrajectory& source, const Vec3& x, double t) {
  const LightconeHit adv = solve_lightcone(source, x, t, Branch::advanced);
  const LightconeHit ret = solve_lightcone(source, x, t, Branch::retarded);
  const FarField fp = far_fields_simple(adv, source.charge(), Branch::advanced);
  const FarField fm = far_fields_simple(ret, source.charge(), Branch::retarded);
  FieldSample s;
  s.E_plus = fp.E;
  s.B_plus = fp.B;
  s.E_minus = fm.E;
  s.B_minus = fm.B;
  s.n_plus = adv.n;
  s.n_minus = ret.n;
  s.E = 0.5 * (fp.E + fm.E);
  s.B = 0.5 * (fp.B + fm.B);
  s.flagged = adv.on_breakpoint || ret.on_breakpoint;
  return s;
}

namespace {

void check_index(std::size_t k, std::span<const PiecewiseTrajectory> trajectories) {
  if (k >= trajectories.size()) throw ArgumentError("particle index out of range");
}

template <class Fn>
auto with_horizon_context(Fn&& fn) {
  try {
    return fn();
  } catch (const DomainError& e) {
    throw DomainError(std::string("simulation horizon exceeded: ") + e.what());
  }
}

}  // namespace

Vec3 lorentz_rhs(std::size_t k, std::span<const PiecewiseTrajectory> trajectories, double t, Side side) {
  check_index(k, trajectories);
  const PiecewiseTrajectory& self = trajectories[k];
  const Kinematics me = self.eval(t, side);
  Vec3 E, B;
  for (std::size_t j = 0; j < trajectories.size(); ++j) {
    if (j == k) continue;
    const FieldSample s = with_horizon_context([&] { return semi_sum_fields(trajectories[j], me.position, t); });
    E += s.E;
    B += s.B;
  }
  return self.charge() * (E + cross(me.velocity, B));
}

Vec3 lowvel_rhs_3body(std::size_t k, std::span<const PiecewiseTrajectory> trajectories, double t,
                      bool with_velocity_terms) {
  check_index(k, trajectories);
  const PiecewiseTrajectory& self = trajectories[k];
  const Vec3 x = self.position(t);
  const Vec3 v_left = self.eval(t, Side::left).velocity;
  const Vec3 v_right = self.eval(t, Side::right).velocity;
  const double w = with_velocity_terms ? 1.0 : 0.0;
  Vec3 total;
  for (std::size_t j = 0; j < trajectories.size(); ++j) {
    if (j == k) continue;
    const double qq = self.charge() * trajectories[j].charge();
    for (Branch b : {Branch::advanced, Branch::retarded}) {
      const LightconeHit hit = with_horizon_context([&] { return solve_lightcone(trajectories[j], x, t, b); });
      const double sgn = branch_sign(b);
      const Vec3& vk = b == Branch::advanced ? v_right : v_left;
      const Vec3 lever = (hit.n + sgn * w * vk) / hit.r;
      total += qq * cross(lever, cross(hit.n, observed_acceleration(hit, b)));
    }
  }
  return total;
}

}  // namespace ndde
