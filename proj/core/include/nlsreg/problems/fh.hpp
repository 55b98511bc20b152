#pragma once

#include <memory>

#include "nlsreg/problem.hpp"
#include "nlsreg/regularizer.hpp"

namespace nlsreg::problems {

/// Sampling grid and integrator settings for the FitzHugh-Nagumo model
///
///   dV/dt = (V - V^3/3 - W + x1) / x2
///   dW/dt = x2 (x3 V - x4 W + x5)
struct FHGrid {
  /// Number of sample intervals; there are intervals + 1 samples.
  Index intervals = 100;
  /// Fixed RK4 steps between consecutive samples.
  int steps_per_sample = 20;
  double t_end = 20.0;
  double v0 = 2.0;
  double w0 = 0.0;
};

struct FHTrajectory {
  Vector v;
  Vector w;
};

/// Trajectory sampled on the grid. Throws EvaluationError if |x2| < 1e-8 or
/// the state becomes non-finite.
FHTrajectory fh_forward(const Vector& x, const FHGrid& grid = {});

/// Trajectory together with d(v, w)/dx from the forward sensitivity
/// equations, integrated with the same RK4 scheme. Rows of `jacobian` follow
/// the residual layout: v samples, then w samples.
struct FHSensitivity {
  FHTrajectory trajectory;
  Matrix jacobian;
};
FHSensitivity fh_sensitivity(const Vector& x, const FHGrid& grid = {});

struct FHInstance {
  FHGrid grid;
  Vector x_true;
  Vector v_data;
  Vector w_data;
};

/// The van der Pol parameters (0, 0.2, 1, 0, 0).
Vector fh_reference_parameters();

/// Noise-free data simulated at `x_true`.
FHInstance generate_fh(const FHGrid& grid = {}, const Vector& x_true = fh_reference_parameters());

/// F(x) = (v(x) - v_data, w(x) - w_data).
class FHProblem final : public LeastSquaresProblem {
 public:
  explicit FHProblem(FHInstance instance);

  const FHInstance& instance() const { return instance_; }

 protected:
  void eval_residual(const Vector& x, Vector& out) override;
  void eval_jprod(const Vector& x, const Vector& v, Vector& out) override;
  void eval_jtprod(const Vector& x, const Vector& w, Vector& out) override;

 private:
  const Matrix& jacobian(const Vector& x);

  FHInstance instance_;
  Vector cached_x_;
  Matrix cached_jacobian_;
  bool cache_valid_ = false;
};

struct FHSetup {
  std::unique_ptr<FHProblem> problem;
  Regularizer regularizer;
  Vector x0;
};

/// Problem with the l1 regularizer and x0 = (0.5, ..., 0.5).
FHSetup make_fh(const FHInstance& instance, double lambda = 10.0);

}  // namespace nlsreg::problems
