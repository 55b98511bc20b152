#include "nlsreg/model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace nlsreg {

GaussNewtonModel::GaussNewtonModel(LeastSquaresProblem& problem, const Regularizer& reg,
                                   Vector x, Vector residual)
    : problem_(&problem),
      reg_(&reg),
      x_(std::move(x)),
      residual_(std::move(residual)),
      f_(0.5 * residual_.squaredNorm()),
      h_((*reg_)(x_)) {
  if (x_.size() != problem.num_variables() || residual_.size() != problem.num_residuals()) {
    throw std::invalid_argument("GaussNewtonModel: dimension mismatch");
  }
}

const Vector& GaussNewtonModel::gradient_at_zero() {
  if (!gradient_) gradient_ = problem_->jtprod(x_, residual_);
  return *gradient_;
}

ShiftContext GaussNewtonModel::shift_context(const Vector& s) const {
  return shift_context(s, radius_);
}

ShiftContext GaussNewtonModel::shift_context(const Vector& s,
                                             std::optional<double> radius) const {
  ShiftContext ctx;
  ctx.base = x_ + s;
  if (radius) ctx.region = TrustRegion{x_, *radius};
  return ctx;
}

ModelValue model_objective(const GaussNewtonModel& model, const Vector& s) {
  if (s.size() != model.size()) throw std::invalid_argument("model_objective: size mismatch");
  ModelValue out;
  out.phi = 0.5 * (model.apply_jacobian(s) + model.residual()).squaredNorm();
  out.psi = model.psi(s);
  return out;
}

FirstProxStep first_prox_step(GaussNewtonModel& model, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("first_prox_step: nu must be positive");
  const Vector& g = model.gradient_at_zero();
  const ProxStep prox =
      model.regularizer().shifted_prox(-nu * g, nu, model.shift_context(Vector::Zero(model.size())));
  FirstProxStep out;
  out.step = prox.step;
  out.psi = prox.value;
  // f cancels in (f + h)(x) - m1(s1; x, 1/nu).
  const double xi = model.h() - g.dot(out.step) - 0.5 / nu * out.step.squaredNorm() - out.psi;
  assert(xi >= -1e-10 * (1.0 + std::abs(model.f() + model.h())));
  out.xi = std::max(0.0, xi);
  return out;
}

}  // namespace nlsreg
