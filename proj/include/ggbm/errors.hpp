#pragma once

#include <stdexcept>
#include <string>

namespace ggbm {

// Argument outside the mathematical domain of an operation (poles, violated
// parameter inequalities). The message names the violated constraint.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A series or quadrature did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A covariance matrix could not be factorized.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ggbm
