#pragma once

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <string>

namespace nlsreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Thrown when a residual or Jacobian evaluation produces non-finite values,
/// for instance when the FitzHugh-Nagumo forward model diverges. Solvers treat
/// it as an unsuccessful trial point.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a proximal operator has no minimizer for the requested step
/// length. The caller should increase the regularization parameter.
class ProxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlsreg
