#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "ndde/vec3.hpp"

namespace ndde {

enum class Side { left, right };

// One cubic piece of a worldline. Coefficients are in the local time
// s = t - t_start: position_k(t) = sum_j coeffs[k][j] s^j.
struct Segment {
  double t_start = 0.0;
  double t_end = 0.0;
  std::array<std::array<double, 4>, 3> coeffs{};

  Vec3 position(double t) const;
  Vec3 velocity(double t) const;
  Vec3 acceleration(double t) const;
  Vec3 third_derivative(double t) const;

  static Segment linear(double t_start, double t_end, const Vec3& x0, const Vec3& v);
  // Cubic Hermite interpolant of end positions and velocities.
  static Segment hermite(double t_start, double t_end, const Vec3& x0, const Vec3& v0, const Vec3& x1,
                         const Vec3& v1);
};

// Discontinuity order: 1 = velocity jump, 2 = acceleration jump, 3 = jump
// first in the third derivative. Order 0 (a position jump) is rejected at
// construction. kSmoothOrder marks a knot where all cubic derivatives agree.
inline constexpr int kSmoothOrder = 4;

struct Breakpoint {
  double t = 0.0;
  int order = kSmoothOrder;
  double v_jump = 0.0;  // |v(t+) - v(t-)|
  double a_jump = 0.0;  // |a(t+) - a(t-)|

  std::string order_tag() const;
};

struct Kinematics {
  Vec3 position;
  Vec3 velocity;
  Vec3 acceleration;
};

inline constexpr double kDefaultVmax = 0.99;

// Worldline x(t) of a point charge as contiguous cubic segments, parametrized
// by coordinate time. Immutable; the only mutator returns a new value.
class PiecewiseTrajectory {
 public:
  PiecewiseTrajectory(std::vector<Segment> segments, double mass, double charge,
                      double v_max = kDefaultVmax);

  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  double mass() const { return mass_; }
  double charge() const { return charge_; }
  double v_max() const { return v_max_; }
  double t_min() const { return segments_.front().t_start; }
  double t_max() const { return segments_.back().t_end; }
  bool contains(double t) const { return t >= t_min() && t <= t_max(); }

  // One-sided kinematics. Throws DomainError outside [t_min, t_max]; at the
  // domain ends the missing side falls back to the existing one.
  Kinematics eval(double t, Side side = Side::right) const;
  Vec3 position(double t) const;

  // Index of the segment that owns t from the given side.
  std::size_t segment_index(double t, Side side) const;

  // Knot index if t coincides with an interior knot (within tol), else -1.
  int breakpoint_index(double t, double tol = 0.0) const;

  // New trajectory with a knot at t whose right velocity is new_right_velocity.
  // The whole future worldline receives the velocity change (v_new - v_old) * (t' - t),
  // so later knots keep their jumps and positions stay continuous.
  PiecewiseTrajectory insert_breakpoint(double t, const Vec3& new_right_velocity) const;

  // x~(t) = x(-t).
  PiecewiseTrajectory time_reversed() const;

  // Largest sampled speed (samples per segment plus both ends).
  double max_sampled_speed(int samples_per_segment = 64) const;

 private:
  std::vector<Segment> segments_;
  std::vector<Breakpoint> breakpoints_;
  std::vector<Vec3> knots_;  // shared endpoint positions, size segments + 1
  double mass_;
  double charge_;
  double v_max_;
};

// Builders used by demos and tests.
PiecewiseTrajectory static_trajectory(const Vec3& position, double t0, double t1, double mass = 1.0,
                                      double charge = -1.0);
PiecewiseTrajectory linear_trajectory(const Vec3& x0_at_t0, const Vec3& velocity, double t0, double t1,
                                      double mass = 1.0, double charge = -1.0);
// Piecewise-constant-velocity path through the given knot positions.
PiecewiseTrajectory polyline_trajectory(std::span<const double> times, std::span<const Vec3> positions,
                                        double mass = 1.0, double charge = -1.0);
// Back-and-forth motion along `direction` with constant speed, centered at `center`.
PiecewiseTrajectory ping_pong_orbit(const Vec3& center, const Vec3& direction, double amplitude,
                                    double speed, double t0, double t1, double mass = 1.0,
                                    double charge = -1.0);
// Circular orbit in the plane spanned by e1, e2 (cubic Hermite pieces).
PiecewiseTrajectory circular_orbit(const Vec3& center, const Vec3& e1, const Vec3& e2, double radius,
                                   double omega, double t0, double t1, int segments_per_turn = 64,
                                   double mass = 1.0, double charge = -1.0);

}  // namespace ndde
