#include "ndde/history.hpp"

#include <sstream>

#include "ndde/errors.hpp"

namespace ndde {

HistoryFunction HistoryFunction::constant(double value, double t_min) {
  return from([value](auto) { return value; }, t_min, Smoothness::C1);
}

HistoryFunction HistoryFunction::affine(double at_zero, double slope, double t_min) {
  return from([at_zero, slope](auto t) { return at_zero + slope * t; }, t_min, Smoothness::C1);
}

void HistoryFunction::check(double t) const {
  if (!value_) throw ArgumentError("history function is empty");
  // Small slack for grid times that land on the domain ends after rounding.
  constexpr double slack = 1e-12;
  if (t < t_min_ - slack || t > slack) {
    std::ostringstream msg;
    msg << "history evaluated at t=" << t << " outside [" << t_min_ << ", 0]";
    throw DomainError(msg.str());
  }
}

double HistoryFunction::value(double t) const {
  check(t);
  return value_(t);
}

double HistoryFunction::derivative(double t) const { return expand(t).c[1]; }

Jet HistoryFunction::expand(double t) const {
  check(t);
  return jet_(Jet::variable(t));
}

}  // namespace ndde
