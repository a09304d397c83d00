#pragma once

#include <stdexcept>
#include <string>

namespace triphase {

// Bad grid/shape/step combinations, CFL violations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments outside an operator's domain (negative time, q outside [0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Initial data violating a structural requirement such as trace compatibility.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, double measured)
      : std::runtime_error(what), measured_(measured) {}
  double measured() const { return measured_; }

 private:
  double measured_;
};

// Operation needs state that was never populated (e.g. stored derivatives).
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace triphase
