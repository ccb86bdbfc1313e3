#pragma once

#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

namespace ndde {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Evaluation outside a trajectory, history, or solution domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Bad argument or violated precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Inserting a breakpoint where one already exists.
class DuplicateBreakpointError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// A denominator or distance collapsed (r = 0, 1 +- n.v below the luminal safeguard, ...).
class SingularityError : public Error {
 public:
  using Error::Error;
};

// A non-finite state appeared while time stepping.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_good_time)
      : Error(what), last_good_time_(last_good_time) {}

  double last_good_time() const { return last_good_time_; }

 private:
  double last_good_time_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace ndde
