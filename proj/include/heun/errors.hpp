#pragma once

#include <stdexcept>
#include <string>

namespace heun {

// Mismatched phase-space kinds or an operation applied to the wrong geometry.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A value left the domain where an observable or function is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by the flow integrator; carries the time at which it gave up.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// A least-squares model could not represent the data.
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace heun
