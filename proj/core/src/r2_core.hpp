#pragma once

// Internal: the proximal-gradient loop shared by the inner subproblem solver
// and the standalone R2 baseline.

#include <functional>
#include <optional>

#include "nlsreg/options.hpp"
#include "nlsreg/regularizer.hpp"
#include "nlsreg/types.hpp"

namespace nlsreg::detail {

/// Smooth part of the objective, evaluated at trial points and committed on
/// acceptance so products can be reused.
class SmoothTerm {
 public:
  virtual ~SmoothTerm() = default;
  /// Value at s, remembered as the pending trial. +inf if evaluation fails.
  virtual double trial_value(const Vector& s) = 0;
  virtual void accept_trial() = 0;
  /// Gradient at the current (last accepted) point.
  virtual const Vector& gradient() = 0;
};

/// psi(s) = h(anchor + s) plus an optional ||s||_inf <= radius constraint.
struct NonsmoothTerm {
  const Regularizer* reg = nullptr;
  Vector anchor;
  std::optional<double> radius;

  ProxStep prox(const Vector& s, const Vector& q, double nu) const {
    ShiftContext ctx;
    ctx.base = anchor + s;
    if (radius) ctx.region = TrustRegion{anchor, *radius};
    return reg->shifted_prox(q, nu, ctx);
  }
};

struct R2Settings {
  double atol = 1e-4;
  double rtol = 0.0;
  /// Test sqrt(xi) < atol + rtol sqrt(xi0) instead of xi <= atol + rtol xi0.
  bool sqrt_measure = false;
  int max_iter = 100;
  double theta = 1.0;
  /// nu_j = theta / (curvature + sigma_j).
  double curvature = 0.0;
  double sigma0 = 1.0;
  double sigma_min = 0.0;
  double sigma_max = 1e15;
  double eta1 = 1e-3;
  double eta2 = 0.75;
  double gamma1 = 3.0;
  double gamma3 = 1.0 / 3.0;
  IterationCallback observer;
};

struct R2Outcome {
  Vector s;
  double smooth = 0.0;
  double psi = 0.0;
  double xi = 0.0;
  double xi0 = 0.0;
  int iterations = 0;
  int successful = 0;
  bool converged = false;
  bool stalled = false;
};

/// `smooth` must already be positioned at s with value smooth_s.
R2Outcome run_r2(SmoothTerm& smooth, const NonsmoothTerm& nonsmooth, Vector s, double smooth_s,
                 double psi_s, const R2Settings& settings);

}  // namespace nlsreg::detail
