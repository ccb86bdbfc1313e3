#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ndde/errors.hpp"
#include "ndde/history.hpp"
#include "ndde/taylor.hpp"
#include "ndde/trajectory.hpp"

namespace ndde {

enum class DelayKind { retarded, neutral };

// Right-hand side of a scalar constant-delay equation.
//   retarded: y'(t) = F(y(t), y(t - tau))
//   neutral:  y'(t) = G(y(t), y(t - tau), y'(t - tau))
// Stored twice: on doubles for stepping and on jets for breaking-point series.
class DelayRhs {
 public:
  template <class F>
  static DelayRhs retarded(F f) {
    DelayRhs r;
    r.kind_ = DelayKind::retarded;
    r.value_ = [f](double y, double yd, double) { return static_cast<double>(f(y, yd)); };
    r.jet_ = [f](const Jet& y, const Jet& yd, const Jet&) { return Jet(f(y, yd)); };
    return r;
  }

  template <class G>
  static DelayRhs neutral(G g) {
    DelayRhs r;
    r.kind_ = DelayKind::neutral;
    r.value_ = [g](double y, double yd, double ydotd) { return static_cast<double>(g(y, yd, ydotd)); };
    r.jet_ = [g](const Jet& y, const Jet& yd, const Jet& ydotd) { return Jet(g(y, yd, ydotd)); };
    return r;
  }

  DelayKind kind() const { return kind_; }
  bool empty() const { return !value_; }
  double operator()(double y, double yd, double ydotd) const { return value_(y, yd, ydotd); }
  Jet operator()(const Jet& y, const Jet& yd, const Jet& ydotd) const { return jet_(y, yd, ydotd); }

 private:
  DelayKind kind_ = DelayKind::retarded;
  std::function<double(double, double, double)> value_;
  std::function<Jet(const Jet&, const Jet&, const Jet&)> jet_;
};

struct ScalarDelayProblem {
  DelayRhs rhs;
  double delay = 1.0;
  HistoryFunction history;
  double horizon = 1.0;
  int steps_per_delay = 200;
};

// One-sided Taylor data of the solution at t = n * delay.
struct BreakingPoint {
  double t = 0.0;
  int index = 0;  // n
  Jet left;       // expansion of y from the left (history for n = 0)
  Jet right;      // expansion of y from the right

  // k-th derivative jump y^(k)(t+) - y^(k)(t-), k in 1..Jet::order.
  double jump(int order) const;
};

// Method-of-steps solution: uniform steps aligned with the delay, cubic
// Hermite dense output per step, and series data at every breaking point.
class ScalarSolution {
 public:
  double delay() const { return delay_; }
  double horizon() const { return horizon_; }
  double step() const { return step_; }
  std::size_t step_count() const { return y_.size() - 1; }
  DelayKind kind() const { return kind_; }

  // Grid node i is at t = i * step (the last node is clamped to the horizon).
  double node_time(std::size_t i) const;
  double node_value(std::size_t i) const { return y_[i]; }
  // Derivative at node i from the left / right (history derivative at node 0, left).
  double node_slope(std::size_t i, Side side) const;

  // Dense output on [0, horizon] (history values for t < 0).
  double value(double t) const;
  double derivative(double t, Side side = Side::right) const;

  const std::vector<BreakingPoint>& breaking_points() const { return breaking_points_; }

 private:
  friend ScalarSolution solve(const ScalarDelayProblem& problem);

  double hermite_value(std::size_t step, double u) const;
  double hermite_slope(std::size_t step, double u) const;
  std::size_t locate(double t, Side side) const;

  DelayKind kind_ = DelayKind::retarded;
  double delay_ = 1.0;
  double horizon_ = 0.0;
  double step_ = 0.0;
  double last_step_ = 0.0;
  HistoryFunction history_;
  std::vector<double> y_;       // nodes
  std::vector<double> d_start_; // per step: right derivative at its start
  std::vector<double> d_end_;   // per step: left derivative at its end
  std::vector<BreakingPoint> breaking_points_;
};

// Raised when the right-hand side produces a non-finite value. Carries the
// solution computed up to the last good node.
class DelayIntegrationError : public IntegrationError {
 public:
  DelayIntegrationError(const std::string& what, double last_good_time,
                        std::shared_ptr<const ScalarSolution> partial)
      : IntegrationError(what, last_good_time), partial_(std::move(partial)) {}

  const std::shared_ptr<const ScalarSolution>& partial() const { return partial_; }

 private:
  std::shared_ptr<const ScalarSolution> partial_;
};

ScalarSolution solve(const ScalarDelayProblem& problem);

struct JumpRecord {
  double t = 0.0;
  double jump = 0.0;
};

// Jumps of the given derivative order (1..4) at every breaking point.
std::vector<JumpRecord> jump_profile(const ScalarSolution& solution, int order);

// Lowest derivative order with |jump| > tol at a breaking point; 0 if none up to 4.
int first_jump_order(const BreakingPoint& bp, double tol);

}  // namespace ndde
