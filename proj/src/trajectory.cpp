#include "ndde/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ndde/errors.hpp"

namespace ndde {

namespace {

Vec3 poly_derivative(const Segment& s, double t, int order) {
  const double u = t - s.t_start;
  Vec3 r;
  for (int k = 0; k < 3; ++k) {
    const auto& c = s.coeffs[k];
    double v = 0.0;
    switch (order) {
      case 0: v = c[0] + u * (c[1] + u * (c[2] + u * c[3])); break;
      case 1: v = c[1] + u * (2.0 * c[2] + u * 3.0 * c[3]); break;
      case 2: v = 2.0 * c[2] + 6.0 * c[3] * u; break;
      default: v = 6.0 * c[3]; break;
    }
    r[k] = v;
  }
  return r;
}

// Relative tolerance for position continuity between independently stored
// segment polynomials. Evaluation at knots always returns the shared knot.
constexpr double kContinuityTol = 1e-12;
constexpr double kJumpTol = 1e-12;

}  // namespace

Vec3 Segment::position(double t) const { return poly_derivative(*this, t, 0); }
Vec3 Segment::velocity(double t) const { return poly_derivative(*this, t, 1); }
Vec3 Segment::acceleration(double t) const { return poly_derivative(*this, t, 2); }
Vec3 Segment::third_derivative(double t) const { return poly_derivative(*this, t, 3); }

Segment Segment::linear(double t_start, double t_end, const Vec3& x0, const Vec3& v) {
  Segment s;
  s.t_start = t_start;
  s.t_end = t_end;
  for (int k = 0; k < 3; ++k) s.coeffs[k] = {x0[k], v[k], 0.0, 0.0};
  return s;
}

Segment Segment::hermite(double t_start, double t_end, const Vec3& x0, const Vec3& v0, const Vec3& x1,
                         const Vec3& v1) {
  Segment s;
  s.t_start = t_start;
  s.t_end = t_end;
  const double h = t_end - t_start;
  for (int k = 0; k < 3; ++k) {
    const double d = x1[k] - x0[k];
    s.coeffs[k] = {x0[k], v0[k], (3.0 * d / h - 2.0 * v0[k] - v1[k]) / h,
                   (-2.0 * d / h + v0[k] + v1[k]) / (h * h)};
  }
  return s;
}

std::string Breakpoint::order_tag() const {
  switch (order) {
    case 1: return "velocity";
    case 2: return "acceleration";
    case 3: return "jerk";
    default: return "smooth";
  }
}

PiecewiseTrajectory::PiecewiseTrajectory(std::vector<Segment> segments, double mass, double charge,
                                         double v_max)
    : segments_(std::move(segments)), mass_(mass), charge_(charge), v_max_(v_max) {
  if (segments_.empty()) throw ArgumentError("trajectory needs at least one segment");
  if (!(mass_ > 0.0) || !std::isfinite(mass_)) throw ArgumentError("mass must be positive");
  if (!std::isfinite(charge_)) throw ArgumentError("charge must be finite");
  if (!(v_max_ > 0.0 && v_max_ < 1.0)) throw ArgumentError("v_max must lie in (0, 1)");

  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    if (!(s.t_start < s.t_end)) throw ArgumentError("segment needs t_start < t_end");
    for (const auto& row : s.coeffs)
      for (double c : row)
        if (!std::isfinite(c)) throw ArgumentError("segment coefficients must be finite");
    if (i > 0 && segments_[i - 1].t_end != s.t_start)
      throw ArgumentError("segments must be contiguous");
  }

  knots_.reserve(segments_.size() + 1);
  knots_.push_back(segments_.front().position(segments_.front().t_start));
  for (std::size_t i = 1; i < segments_.size(); ++i) {
    const Segment& l = segments_[i - 1];
    const Segment& r = segments_[i];
    const Vec3 xl = l.position(l.t_end);
    const Vec3 xr = r.position(r.t_start);
    const double scale = 1.0 + std::max(norm(xl), norm(xr));
    if (norm(xl - xr) > kContinuityTol * scale) {
      std::ostringstream msg;
      msg << "position jump at t=" << r.t_start << " (discontinuity order 0 is forbidden)";
      throw ArgumentError(msg.str());
    }
    knots_.push_back(xr);

    Breakpoint bp;
    bp.t = r.t_start;
    const Vec3 dv = r.velocity(r.t_start) - l.velocity(l.t_end);
    const Vec3 da = r.acceleration(r.t_start) - l.acceleration(l.t_end);
    const Vec3 dj = r.third_derivative(r.t_start) - l.third_derivative(l.t_end);
    bp.v_jump = norm(dv);
    bp.a_jump = norm(da);
    if (bp.v_jump > kJumpTol)
      bp.order = 1;
    else if (bp.a_jump > kJumpTol)
      bp.order = 2;
    else if (norm(dj) > kJumpTol)
      bp.order = 3;
    else
      bp.order = kSmoothOrder;
    breakpoints_.push_back(bp);
  }
  knots_.push_back(segments_.back().position(segments_.back().t_end));

  const double vmax_seen = max_sampled_speed();
  if (vmax_seen > v_max_) {
    std::ostringstream msg;
    msg << "trajectory speed " << vmax_seen << " exceeds v_max " << v_max_;
    throw ArgumentError(msg.str());
  }
}

std::size_t PiecewiseTrajectory::segment_index(double t, Side side) const {
  if (!contains(t)) {
    std::ostringstream msg;
    msg << "t=" << t << " outside trajectory domain [" << t_min() << ", " << t_max() << "]";
    throw DomainError(msg.str());
  }
  // First segment with t_end > t (right side) or t_end >= t (left side).
  auto it = side == Side::right
                ? std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](double v, const Segment& s) { return v < s.t_end; })
                : std::lower_bound(segments_.begin(), segments_.end(), t,
                                   [](const Segment& s, double v) { return s.t_end < v; });
  if (it == segments_.end()) return segments_.size() - 1;
  auto idx = static_cast<std::size_t>(it - segments_.begin());
  if (side == Side::left && idx > 0 && t == segments_[idx].t_start) --idx;
  if (side == Side::left && t == t_min()) idx = 0;
  return idx;
}

int PiecewiseTrajectory::breakpoint_index(double t, double tol) const {
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t - tol,
                             [](const Breakpoint& b, double v) { return b.t < v; });
  if (it != breakpoints_.end() && std::abs(it->t - t) <= tol)
    return static_cast<int>(it - breakpoints_.begin());
  return -1;
}

Kinematics PiecewiseTrajectory::eval(double t, Side side) const {
  const std::size_t i = segment_index(t, side);
  const Segment& s = segments_[i];
  Kinematics k;
  if (t == s.t_start)
    k.position = knots_[i];
  else if (t == s.t_end)
    k.position = knots_[i + 1];
  else
    k.position = s.position(t);
  k.velocity = s.velocity(t);
  k.acceleration = s.acceleration(t);
  return k;
}

Vec3 PiecewiseTrajectory::position(double t) const { return eval(t, Side::right).position; }

PiecewiseTrajectory PiecewiseTrajectory::insert_breakpoint(double t, const Vec3& new_right_velocity) const {
  if (!contains(t) || t == t_min() || t == t_max())
    throw DomainError("breakpoint time must lie strictly inside the trajectory domain");
  if (breakpoint_index(t) >= 0) throw DuplicateBreakpointError("a breakpoint already exists at this time");

  const std::size_t idx = segment_index(t, Side::right);
  const Segment& host = segments_[idx];
  const Vec3 dv = new_right_velocity - host.velocity(t);
  const Vec3 x_at = host.position(t);

  std::vector<Segment> out;
  out.reserve(segments_.size() + 1);
  for (std::size_t i = 0; i < idx; ++i) out.push_back(segments_[i]);

  Segment left = host;
  left.t_end = t;
  out.push_back(left);

  // Re-expand the host polynomial about t for the right piece.
  Segment right;
  right.t_start = t;
  right.t_end = host.t_end;
  const Vec3 v_at = host.velocity(t);
  const Vec3 a_at = host.acceleration(t);
  const Vec3 j_at = host.third_derivative(t);
  for (int k = 0; k < 3; ++k)
    right.coeffs[k] = {x_at[k], v_at[k] + dv[k], a_at[k] / 2.0, j_at[k] / 6.0};
  out.push_back(right);

  for (std::size_t i = idx + 1; i < segments_.size(); ++i) {
    Segment s = segments_[i];
    const double lag = s.t_start - t;
    for (int k = 0; k < 3; ++k) {
      s.coeffs[k][0] += dv[k] * lag;
      s.coeffs[k][1] += dv[k];
    }
    out.push_back(s);
  }
  return PiecewiseTrajectory(std::move(out), mass_, charge_, v_max_);
}

PiecewiseTrajectory PiecewiseTrajectory::time_reversed() const {
  std::vector<Segment> out;
  out.reserve(segments_.size());
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    // x~(t) = x(-t) on [-t_end, -t_start]; expand about the new start -t_end.
    const double t_old = it->t_end;
    const Vec3 x = it->position(t_old);
    const Vec3 v = it->velocity(t_old);
    const Vec3 a = it->acceleration(t_old);
    const Vec3 j = it->third_derivative(t_old);
    Segment s;
    s.t_start = -it->t_end;
    s.t_end = -it->t_start;
    for (int k = 0; k < 3; ++k) s.coeffs[k] = {x[k], -v[k], a[k] / 2.0, -j[k] / 6.0};
    out.push_back(s);
  }
  // Snap re-expanded starts onto the original knots so continuity is exact.
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec3 knot = knots_[segments_.size() - i];
    for (int k = 0; k < 3; ++k) out[i].coeffs[k][0] = knot[k];
  }
  return PiecewiseTrajectory(std::move(out), mass_, charge_, v_max_);
}

double PiecewiseTrajectory::max_sampled_speed(int samples_per_segment) const {
  double vmax = 0.0;
  for (const Segment& s : segments_) {
    for (int i = 0; i <= samples_per_segment; ++i) {
      const double t = s.t_start + (s.t_end - s.t_start) * i / samples_per_segment;
      vmax = std::max(vmax, norm(s.velocity(std::min(t, s.t_end))));
    }
  }
  return vmax;
}

PiecewiseTrajectory static_trajectory(const Vec3& position, double t0, double t1, double mass,
                                      double charge) {
  return PiecewiseTrajectory({Segment::linear(t0, t1, position, {})}, mass, charge);
}

PiecewiseTrajectory linear_trajectory(const Vec3& x0_at_t0, const Vec3& velocity, double t0, double t1,
                                      double mass, double charge) {
  return PiecewiseTrajectory({Segment::linear(t0, t1, x0_at_t0, velocity)}, mass, charge);
}

PiecewiseTrajectory polyline_trajectory(std::span<const double> times, std::span<const Vec3> positions,
                                        double mass, double charge) {
  if (times.size() < 2 || times.size() != positions.size())
    throw ArgumentError("polyline needs matching times/positions, at least two of each");
  std::vector<Segment> segs;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double h = times[i + 1] - times[i];
    if (!(h > 0.0)) throw ArgumentError("polyline times must increase");
    Segment s = Segment::linear(times[i], times[i + 1], positions[i], (positions[i + 1] - positions[i]) / h);
    segs.push_back(s);
  }
  return PiecewiseTrajectory(std::move(segs), mass, charge);
}

PiecewiseTrajectory ping_pong_orbit(const Vec3& center, const Vec3& direction, double amplitude,
                                    double speed, double t0, double t1, double mass, double charge) {
  if (!(amplitude > 0.0) || !(speed > 0.0) || !(t1 > t0))
    throw ArgumentError("ping-pong orbit needs positive amplitude, speed and span");
  const Vec3 d = normalized(direction);
  const double leg = 2.0 * amplitude / speed;
  std::vector<double> times{t0};
  std::vector<Vec3> pos{center};
  // Start at the center heading +d; first turn after a quarter period.
  double t = t0 + amplitude / speed;
  double sign = 1.0;
  while (t < t1) {
    times.push_back(t);
    pos.push_back(center + d * (sign * amplitude));
    sign = -sign;
    t += leg;
  }
  const double tail = t1 - times.back();
  times.push_back(t1);
  pos.push_back(pos.back() + d * (sign * speed * tail));
  return polyline_trajectory(times, pos, mass, charge);
}

PiecewiseTrajectory circular_orbit(const Vec3& center, const Vec3& e1, const Vec3& e2, double radius,
                                   double omega, double t0, double t1, int segments_per_turn, double mass,
                                   double charge) {
  if (!(radius > 0.0) || !(omega > 0.0) || segments_per_turn < 4 || !(t1 > t0))
    throw ArgumentError("circular orbit needs positive radius, omega, span and >= 4 pieces per turn");
  const Vec3 u = normalized(e1);
  const Vec3 w = normalized(e2 - u * dot(e2, u));
  const double period = 2.0 * std::numbers::pi / omega;
  const auto n = static_cast<std::size_t>(std::ceil((t1 - t0) / period * segments_per_turn));
  auto pos = [&](double t) {
    const double ph = omega * (t - t0);
    return center + radius * (std::cos(ph) * u + std::sin(ph) * w);
  };
  auto vel = [&](double t) {
    const double ph = omega * (t - t0);
    return radius * omega * (-std::sin(ph) * u + std::cos(ph) * w);
  };
  std::vector<Segment> segs;
  segs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n);
    const double b = i + 1 == n ? t1 : t0 + (t1 - t0) * static_cast<double>(i + 1) / static_cast<double>(n);
    segs.push_back(Segment::hermite(a, b, pos(a), vel(a), pos(b), vel(b)));
  }
  // Share knots exactly.
  for (std::size_t i = 1; i < segs.size(); ++i) {
    const Vec3 x = segs[i - 1].position(segs[i - 1].t_end);
    for (int k = 0; k < 3; ++k) segs[i].coeffs[k][0] = x[k];
  }
  return PiecewiseTrajectory(std::move(segs), mass, charge);
}

}  // namespace ndde
