#include "ndde/delay_core.hpp"

#include <cmath>
#include <sstream>

namespace ndde {

double BreakingPoint::jump(int order) const {
  if (order < 1 || order > static_cast<int>(Jet::order))
    throw ArgumentError("jump order must lie in 1..4");
  const auto k = static_cast<std::size_t>(order);
  return right.derivative(k) - left.derivative(k);
}

int first_jump_order(const BreakingPoint& bp, double tol) {
  for (int k = 1; k <= static_cast<int>(Jet::order); ++k)
    if (std::abs(bp.jump(k)) > tol) return k;
  return 0;
}

double ScalarSolution::node_time(std::size_t i) const {
  return i == step_count() ? horizon_ : static_cast<double>(i) * step_;
}

double ScalarSolution::node_slope(std::size_t i, Side side) const {
  if (side == Side::left) return i == 0 ? history_.derivative(0.0) : d_end_[i - 1];
  return i == step_count() ? d_end_[i - 1] : d_start_[i];
}

double ScalarSolution::hermite_value(std::size_t s, double u) const {
  const double h = s + 1 == step_count() ? last_step_ : step_;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y_[s] + (u3 - 2 * u2 + u) * h * d_start_[s] + (-2 * u3 + 3 * u2) * y_[s + 1] +
         (u3 - u2) * h * d_end_[s];
}

double ScalarSolution::hermite_slope(std::size_t s, double u) const {
  const double h = s + 1 == step_count() ? last_step_ : step_;
  const double u2 = u * u;
  return (6 * u2 - 6 * u) * y_[s] / h + (3 * u2 - 4 * u + 1) * d_start_[s] + (-6 * u2 + 6 * u) * y_[s + 1] / h +
         (3 * u2 - 2 * u) * d_end_[s];
}

std::size_t ScalarSolution::locate(double t, Side side) const {
  if (t < 0.0 || t > horizon_) {
    std::ostringstream msg;
    msg << "t=" << t << " outside solution domain [0, " << horizon_ << "]";
    throw DomainError(msg.str());
  }
  const double q = t / step_;
  auto i = static_cast<std::size_t>(std::floor(q));
  const double nearest = std::round(q);
  const bool on_node = std::abs(q - nearest) <= 1e-12 * std::max(1.0, q);
  if (on_node) {
    i = static_cast<std::size_t>(nearest);
    if (side == Side::left && i > 0) --i;
  }
  return std::min(i, step_count() - 1);
}

double ScalarSolution::value(double t) const {
  if (t < 0.0) return history_.value(t);
  const std::size_t s = locate(t, Side::right);
  const double h = s + 1 == step_count() ? last_step_ : step_;
  return hermite_value(s, std::clamp((t - node_time(s)) / h, 0.0, 1.0));
}

double ScalarSolution::derivative(double t, Side side) const {
  if (t < 0.0 || (t == 0.0 && side == Side::left)) return history_.derivative(t);
  const std::size_t s = locate(t, side);
  const double h = s + 1 == step_count() ? last_step_ : step_;
  return hermite_slope(s, std::clamp((t - node_time(s)) / h, 0.0, 1.0));
}

namespace {

// Taylor-method recursion: coefficients of y about a breaking point, given
// y there and the expansion of the delayed argument on the same side.
Jet expand_solution(const DelayRhs& rhs, double y0, const Jet& delayed) {
  Jet y(y0);
  const Jet delayed_slope = delayed.derivative_series();
  for (std::size_t k = 0; k < Jet::order; ++k) {
    const Jet f = rhs(y, delayed, delayed_slope);
    y.c[k + 1] = f.c[k] / static_cast<double>(k + 1);
  }
  return y;
}

}  // namespace

ScalarSolution solve(const ScalarDelayProblem& p) {
  if (p.rhs.empty()) throw ArgumentError("delay problem needs a right-hand side");
  if (!(p.delay > 0.0) || !std::isfinite(p.delay)) throw ArgumentError("delay must be positive");
  if (!(p.horizon > 0.0) || !std::isfinite(p.horizon)) throw ArgumentError("horizon must be positive");
  if (p.steps_per_delay < 1) throw ArgumentError("steps_per_delay must be at least 1");
  if (p.history.t_min() > -p.delay * (1.0 - 1e-12)) throw ArgumentError("history must cover [-delay, 0]");

  ScalarSolution sol;
  sol.kind_ = p.rhs.kind();
  sol.delay_ = p.delay;
  sol.horizon_ = p.horizon;
  sol.history_ = p.history;
  const std::size_t n_per = static_cast<std::size_t>(p.steps_per_delay);
  sol.step_ = p.delay / static_cast<double>(n_per);
  const auto n_steps = static_cast<std::size_t>(std::ceil(p.horizon / sol.step_ - 1e-9));
  sol.last_step_ = p.horizon - static_cast<double>(n_steps - 1) * sol.step_;

  sol.y_.reserve(n_steps + 1);
  sol.d_start_.reserve(n_steps);
  sol.d_end_.reserve(n_steps);
  sol.y_.push_back(p.history.value(0.0));

  auto fail = [&](std::size_t i) {
    auto partial = std::make_shared<ScalarSolution>(sol);
    const std::size_t done = partial->d_start_.size();
    partial->y_.resize(done + 1);
    partial->d_end_.resize(done);
    partial->horizon_ = static_cast<double>(done) * sol.step_;
    partial->last_step_ = sol.step_;
    partial->breaking_points_.clear();
    std::ostringstream msg;
    msg << "non-finite right-hand side in step starting at t=" << static_cast<double>(i) * sol.step_;
    const double last_good = partial->horizon_;
    throw DelayIntegrationError(msg.str(), last_good, std::move(partial));
  };

  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t0 = static_cast<double>(i) * sol.step_;
    const double hs = i + 1 == n_steps ? sol.last_step_ : sol.step_;
    const bool from_history = i < n_per;
    const std::size_t j = from_history ? 0 : i - n_per;

    // Delayed value and slope at fraction u of this step, taken inside the
    // step one delay earlier so one-sided limits come out right.
    auto delayed = [&](double u) -> std::pair<double, double> {
      if (from_history) {
        const double td = t0 + u * hs - p.delay;
        const Jet e = p.history.expand(std::min(td, 0.0));
        return {e.c[0], e.c[1]};
      }
      const double uj = u * hs / sol.step_;
      return {sol.hermite_value(j, uj), sol.hermite_slope(j, uj)};
    };
    auto f = [&](double u, double y) {
      const auto [yd, ydd] = delayed(u);
      return p.rhs(y, yd, ydd);
    };

    const double y0 = sol.y_[i];
    const double k1 = f(0.0, y0);
    const double k2 = f(0.5, y0 + 0.5 * hs * k1);
    const double k3 = f(0.5, y0 + 0.5 * hs * k2);
    const double k4 = f(1.0, y0 + hs * k3);
    const double y1 = y0 + hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double d1 = std::isfinite(y1) ? f(1.0, y1) : y1;
    if (!std::isfinite(k1) || !std::isfinite(k2) || !std::isfinite(k3) || !std::isfinite(k4) ||
        !std::isfinite(y1) || !std::isfinite(d1))
      fail(i);
    sol.y_.push_back(y1);
    sol.d_start_.push_back(k1);
    sol.d_end_.push_back(d1);
  }

  const auto n_bp = static_cast<std::size_t>(std::floor(p.horizon / p.delay + 1e-9));
  for (std::size_t n = 0; n <= n_bp; ++n) {
    BreakingPoint bp;
    bp.index = static_cast<int>(n);
    bp.t = static_cast<double>(n) * p.delay;
    const double yn = sol.y_[std::min(n * n_per, n_steps)];
    if (n == 0) {
      bp.left = p.history.expand(0.0);
      bp.right = expand_solution(p.rhs, yn, p.history.expand(-p.delay));
    } else {
      const BreakingPoint& prev = sol.breaking_points_.back();
      bp.left = expand_solution(p.rhs, yn, prev.left);
      bp.right = expand_solution(p.rhs, yn, prev.right);
    }
    sol.breaking_points_.push_back(bp);
  }
  return sol;
}

std::vector<JumpRecord> jump_profile(const ScalarSolution& solution, int order) {
  if (order < 1 || order > static_cast<int>(Jet::order))
    throw ArgumentError("jump order must lie in 1..4");
  std::vector<JumpRecord> out;
  out.reserve(solution.breaking_points().size());
  for (const auto& bp : solution.breaking_points()) out.push_back({bp.t, bp.jump(order)});
  return out;
}

}  // namespace ndde
