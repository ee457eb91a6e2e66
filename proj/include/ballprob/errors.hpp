#pragma once

#include <stdexcept>
#include <string>

namespace ballprob {

/// Invalid input for an operation (negative eigenvalue, asymmetric matrix,
/// singular system, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A formula's applicability condition does not hold for the given inputs.
class ConditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not reach the requested accuracy. Carries the
/// error estimate it did achieve.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_error_(achieved) {}

  double achieved_error() const { return achieved_error_; }

 private:
  double achieved_error_;
};

}  // namespace ballprob
