#pragma once

#include <functional>
#include <utility>

#include "ndde/taylor.hpp"

namespace ndde {

enum class Smoothness { C0, C1 };

// Initial data y(t) on [t_min, 0] for a constant-delay problem. Built from a
// generic callable so that it can be evaluated on doubles and on jets.
class HistoryFunction {
 public:
  HistoryFunction() = default;

  template <class F>
  static HistoryFunction from(F f, double t_min, Smoothness smoothness = Smoothness::C1) {
    HistoryFunction h;
    h.t_min_ = t_min;
    h.smoothness_ = smoothness;
    h.value_ = [f](double t) { return static_cast<double>(f(t)); };
    h.jet_ = [f](const Jet& t) { return Jet(f(t)); };
    return h;
  }

  static HistoryFunction constant(double value, double t_min);
  static HistoryFunction affine(double at_zero, double slope, double t_min);

  double t_min() const { return t_min_; }
  Smoothness smoothness() const { return smoothness_; }

  double value(double t) const;
  double derivative(double t) const;
  // Taylor expansion about t (derivatives up to Jet::order).
  Jet expand(double t) const;

 private:
  void check(double t) const;

  double t_min_ = -1.0;
  Smoothness smoothness_ = Smoothness::C1;
  std::function<double(double)> value_;
  std::function<Jet(const Jet&)> jet_;
};

}  // namespace ndde
