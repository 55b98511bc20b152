#pragma once

#include <functional>
#include <limits>

namespace nlsreg {

/// One outer iteration as seen by observers and recorded in the trace.
struct IterationRecord {
  int iteration = 0;
  double f = 0.0;
  double h = 0.0;
  /// xi_1 (LM), hat-xi_1 (LMTR) or the R2 measure at x_k.
  double xi = 0.0;
  /// sigma_k (LM, R2) or Delta_k (LMTR) used for this iteration.
  double parameter = 0.0;
  /// Steplength nu_k.
  double nu = 0.0;
  /// Radius handed to the inner solver (LMTR), otherwise +inf.
  double inner_radius = 0.0;
  double step_norm = 0.0;
  double step_norm_inf = 0.0;
  /// (phi + psi)(0) - (phi + psi)(s_k); excludes 0.5 sigma ||s||^2.
  double model_decrease = 0.0;
  /// Objective (f + h) at the trial point x_k + s_k.
  double trial_objective = 0.0;
  double rho = 0.0;
  bool accepted = false;
  int inner_iterations = 0;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

/// Constants shared by the LM, LMTR and R2 solvers. Defaults follow common
/// trust-region practice; sigma0 and radius0 follow the reference experiments.
struct SolverOptions {
  double atol = 1e-4;
  double rtol = 1e-4;
  /// LM stops on sqrt(xi1) < atol by default; set to add rtol sqrt(xi1_0).
  bool lm_relative_stop = false;
  /// Inner solves stop on sqrt(hat-xi_1) < threshold instead of
  /// hat-xi_1 <= threshold, matching the scaling of the outer test.
  bool inner_sqrt_stop = true;

  double theta = 0.99;
  double eta1 = 1e-3;
  double eta2 = 0.75;
  double gamma1 = 3.0;
  double gamma2 = 10.0;
  double gamma3 = 1.0 / 3.0;
  /// Trust-region shrink factor on rejected steps.
  double gamma_shrink = 0.25;

  double sigma0 = 0.01;
  /// Initial hat-sigma of the standalone R2 baseline (first step length 1).
  double r2_sigma0 = 1.0;
  double sigma_min = 1e-8;
  double sigma_max = 1e15;

  double radius0 = 1.0;
  double radius_min = 1e-15;
  double radius_max = 1e10;
  /// Inner radius is min(beta ||s1||_inf, radius); the default leaves the
  /// outer radius in charge.
  double beta = 1.0 / std::numeric_limits<double>::epsilon();
  double alpha = 1e8;

  int max_outer = 500;
  int max_inner = 100;

  double power_tol = 1e-4;
  int power_max_iter = 100;

  IterationCallback callback;

  /// Throws std::invalid_argument on inconsistent constants.
  void validate() const;
};

}  // namespace nlsreg
