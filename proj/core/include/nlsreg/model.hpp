#pragma once

#include <optional>

#include "nlsreg/problem.hpp"
#include "nlsreg/regularizer.hpp"
#include "nlsreg/types.hpp"

namespace nlsreg {

struct ModelValue {
  double phi = 0.0;  // 0.5 ||J s + F||^2
  double psi = 0.0;  // h(x + s)
};

/// Gauss-Newton model frozen at x_k:
///
///   m(s) = 0.5 ||J(x_k) s + F(x_k)||^2 + 0.5 sigma ||s||^2 + h(x_k + s)
///
/// optionally restricted to ||s||_inf <= radius. With sigma = 0 and a radius
/// this is the trust-region subproblem.
class GaussNewtonModel {
 public:
  /// Evaluates h(x) once; the residual F(x) must already be known.
  GaussNewtonModel(LeastSquaresProblem& problem, const Regularizer& reg, Vector x,
                   Vector residual);

  LeastSquaresProblem& problem() const { return *problem_; }
  const Regularizer& regularizer() const { return *reg_; }

  const Vector& x() const { return x_; }
  const Vector& residual() const { return residual_; }
  Index size() const { return x_.size(); }

  /// phi(0) = f(x_k).
  double f() const { return f_; }
  /// psi(0) = h(x_k).
  double h() const { return h_; }

  double sigma() const { return sigma_; }
  void set_sigma(double sigma) { sigma_ = sigma; }

  const std::optional<double>& radius() const { return radius_; }
  void set_radius(std::optional<double> radius) { radius_ = radius; }

  /// J(x_k)^T F(x_k); computed on first use with one transposed product.
  const Vector& gradient_at_zero();

  Vector apply_jacobian(const Vector& v) const { return problem_->jprod(x_, v); }
  Vector apply_jacobian_transpose(const Vector& w) const {
    return problem_->jtprod(x_, w);
  }

  /// h(x_k + s).
  double psi(const Vector& s) const { return (*reg_)(x_ + s); }

  /// Prox context for a step taken from s: base x_k + s, trust region
  /// centered at x_k when a radius is set.
  ShiftContext shift_context(const Vector& s) const;
  ShiftContext shift_context(const Vector& s, std::optional<double> radius) const;

 private:
  LeastSquaresProblem* problem_;
  const Regularizer* reg_;
  Vector x_;
  Vector residual_;
  double f_;
  double h_;
  double sigma_ = 0.0;
  std::optional<double> radius_;
  std::optional<Vector> gradient_;
};

/// phi(s; x_k) from one Jacobian product and psi(s; x_k) = h(x_k + s).
ModelValue model_objective(const GaussNewtonModel& model, const Vector& s);

struct FirstProxStep {
  Vector step;
  /// psi(s1) = h(x_k + s1).
  double psi = 0.0;
  /// f + h - m1(s1; x_k, 1/nu); nonnegative, zero iff s1 = 0 is optimal.
  double xi = 0.0;
};

/// s1 in prox_{nu psi}(-nu J^T F), with the model's trust region when set,
/// and the stationarity measure attached to it.
FirstProxStep first_prox_step(GaussNewtonModel& model, double nu);

}  // namespace nlsreg
