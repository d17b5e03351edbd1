#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sbt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A closed-form field was evaluated outside its domain (e.g. |x| >= 1 for the hemisphere).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Second derivatives of |x_i|^{k+alpha} are unbounded on coordinate hyperplanes when k+alpha < 2.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

// Hypothesis or invariant of an input parameter set is violated.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// O(M^2) pair sums or tensor rules that would exceed the configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Degenerate geometry, solver failure, non-finite results.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Bad command line or config file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class StarShapeError : public Error {
 public:
  StarShapeError(const std::string& what, Eigen::VectorXd witness_point, Eigen::VectorXd witness_normal)
      : Error(what), witness(std::move(witness_point)), normal(std::move(witness_normal)) {}

  Eigen::VectorXd witness;
  Eigen::VectorXd normal;
};

}  // namespace sbt
