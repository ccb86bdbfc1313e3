#include "ndde/lightcone.hpp"

#include <cmath>
#include <sstream>

#include "ndde/errors.hpp"

namespace ndde {

namespace {

// Position used during iteration; iterates that leave the domain see the
// worldline continued at constant velocity from the nearest end.
Vec3 extended_position(const PiecewiseTrajectory& traj, double s, Side side, Vec3* velocity) {
  if (s < traj.t_min()) {
    const Kinematics k = traj.eval(traj.t_min(), Side::right);
    if (velocity) *velocity = k.velocity;
    return k.position + k.velocity * (s - traj.t_min());
  }
  if (s > traj.t_max()) {
    const Kinematics k = traj.eval(traj.t_max(), Side::left);
    if (velocity) *velocity = k.velocity;
    return k.position + k.velocity * (s - traj.t_max());
  }
  const Kinematics k = traj.eval(s, side);
  if (velocity) *velocity = k.velocity;
  return k.position;
}

}  // namespace

LightconeHit solve_lightcone(const PiecewiseTrajectory& traj, const Vec3& x, double t, Branch branch,
                             const LightconeOptions& opt) {
  const double sgn = branch_sign(branch);
  const Side side = causal_side(branch);
  const double scale = 1.0 + std::abs(t);

  // Contraction phase: |ds'/ds| <= v_max < 1.
  double s = t;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const double next = t + sgn * norm(extended_position(traj, s, side, nullptr) - x);
    const double diff = std::abs(next - s);
    s = next;
    if (diff <= opt.fixed_point_tol * scale) break;
  }

  // Newton polish on g(s) = s - t -+ |x_k(s) - x|, g'(s) = 1 +- n.v >= 1 - v_max.
  auto g_of = [&](double sv, Vec3* v) {
    const Vec3 xk = extended_position(traj, sv, side, v);
    return std::pair{sv - t - sgn * norm(x - xk), x - xk};
  };
  const double tol = opt.newton_tol * scale;
  double g = 0.0;
  for (int newton = 0; newton < 50 && it < opt.max_iterations; ++newton, ++it) {
    Vec3 v;
    const auto [gv, d] = g_of(s, &v);
    g = gv;
    const double r = norm(d);
    if (std::abs(g) <= 0.01 * tol || r == 0.0) break;
    const double step = g / (1.0 + sgn * dot(d / r, v));
    s -= step;
    if (std::abs(step) <= 1e-16 * scale) {
      g = g_of(s, nullptr).first;
      break;
    }
  }

  // g is strictly increasing; Newton can cycle across a velocity kink, so
  // fall back to bisection on a bracket around the current iterate.
  if (std::abs(g) > tol) {
    double lo = s;
    double hi = s;
    double width = std::max(std::abs(g), tol);
    while (g_of(lo, nullptr).first > 0.0) lo -= (width *= 2.0);
    width = std::max(std::abs(g), tol);
    while (g_of(hi, nullptr).first < 0.0) hi += (width *= 2.0);
    for (int k = 0; k < 200 && hi - lo > 1e-16 * scale; ++k) {
      const double mid = 0.5 * (lo + hi);
      if (g_of(mid, nullptr).first > 0.0)
        hi = mid;
      else
        lo = mid;
    }
    s = 0.5 * (lo + hi);
  }

  if (!traj.contains(s)) {
    std::ostringstream msg;
    msg << (branch == Branch::retarded ? "retarded" : "advanced") << " time " << s << " for t=" << t
        << " lies outside trajectory domain [" << traj.t_min() << ", " << traj.t_max() << "]";
    throw DomainError(msg.str());
  }

  LightconeHit hit;
  hit.iterations = it;
  const int bp = traj.breakpoint_index(s, 1e-12 * scale);
  if (bp >= 0) {
    s = traj.breakpoints()[static_cast<std::size_t>(bp)].t;
    hit.on_breakpoint = true;
  }
  const Kinematics k = traj.eval(s, side);
  const Vec3 d = x - k.position;
  hit.t_dev = s;
  hit.r = norm(d);
  if (!(hit.r > 0.0)) throw SingularityError("observation point coincides with the source (r = 0)");
  hit.n = d / hit.r;
  hit.position = k.position;
  hit.v_dev = k.velocity;
  hit.a_dev = k.acceleration;
  hit.dtdev_dt = deviating_derivative(hit, branch, traj.v_max());

  const double resid = std::abs(hit.t_dev - t - sgn * hit.r);
  if (resid > opt.newton_tol * scale && !hit.on_breakpoint) {
    std::ostringstream msg;
    msg << "lightcone solve did not converge (residual " << resid << ")";
    throw Error(msg.str());
  }
  return hit;
}

double deviating_derivative(const LightconeHit& hit, Branch branch, double v_max) {
  const double denom = 1.0 + branch_sign(branch) * dot(hit.n, hit.v_dev);
  if (denom <= 1.0 - v_max - 1e-15) throw SingularityError("1 +- n.v below the sub-luminal safeguard");
  return 1.0 / denom;
}

double lightcone_residual(const PiecewiseTrajectory& traj, const Vec3& x, double t, Branch branch,
                          const LightconeHit& hit) {
  const Vec3 xk = traj.eval(hit.t_dev, causal_side(branch)).position;
  return hit.t_dev - t - branch_sign(branch) * norm(xk - x);
}

}  // namespace ndde
