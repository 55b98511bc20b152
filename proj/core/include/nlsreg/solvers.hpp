#pragma once

#include <optional>

#include "nlsreg/model.hpp"
#include "nlsreg/options.hpp"
#include "nlsreg/problem.hpp"
#include "nlsreg/regularizer.hpp"
#include "nlsreg/stats.hpp"

namespace nlsreg {

/// Settings of one inner solve.
struct InnerOptions {
  /// Stop as soon as the inner measure hat-xi_1 <= stop, or
  /// sqrt(hat-xi_1) < stop when `sqrt_stop` is set.
  double stop = 1e-1;
  bool sqrt_stop = false;
  int max_inner = 100;
  double theta = 0.99;
  double eta1 = 1e-3;
  double eta2 = 0.75;
  double gamma1 = 3.0;
  double gamma3 = 1.0 / 3.0;
  /// Curvature bound of the smooth part, ||J||^2 + sigma.
  double curvature = 1.0;
};

struct InnerResult {
  Vector step;
  double phi = 0.0;
  double psi = 0.0;
  /// (phi + psi)(0) - (phi + psi)(s); the 0.5 sigma ||s||^2 term is excluded.
  double model_decrease = 0.0;
  double xi = 0.0;
  int iterations = 0;
  int prox_calls = 0;
  bool converged = false;
  bool stalled = false;
};

/// Proximal gradient with adaptive quadratic regularization on the model
/// m(s) = phi(s) + 0.5 sigma ||s||^2 + psi(s), started at `warm_start`
/// (typically s1). Step lengths are nu_j = theta / (curvature + hat-sigma_j).
/// The returned step never increases m relative to s = 0.
InnerResult r2_solve(GaussNewtonModel& model, const Vector& warm_start,
                     const InnerOptions& opts);

/// Inner stopping threshold: 0.1 on the first outer iteration, then
/// max(atol, min(0.1, xi / 10)).
double inner_stop_threshold(int outer_iteration, double xi, double atol);

/// Regularization update of the LM method for a given ratio rho.
double update_sigma(double sigma, double rho, const SolverOptions& opts);

/// Trust-region radius update of LMTR for a given ratio rho.
double update_radius(double radius, double rho, const SolverOptions& opts);

/// Nonsmooth regularized Levenberg-Marquardt method.
SolverStats lm_solve(LeastSquaresProblem& problem, const Regularizer& reg,
                     const Vector& x0, const SolverOptions& opts = {});

/// Trust-region variant with an l-infinity trust region.
SolverStats lmtr_solve(LeastSquaresProblem& problem, const Regularizer& reg,
                       const Vector& x0, const SolverOptions& opts = {});

/// Standalone R2 on f + h with f = 0.5 ||F||^2, used as the first-order
/// baseline. Stops on sqrt(xi) < atol + rtol sqrt(xi_0).
SolverStats r2_minimize(LeastSquaresProblem& problem, const Regularizer& reg,
                        const Vector& x0, const SolverOptions& opts = {});

}  // namespace nlsreg
