#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "nlsreg/solvers.hpp"

namespace nlsreg {

const char* to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::FirstOrder: return "first_order";
    case SolverStatus::MaxIterations: return "max_iter";
    case SolverStatus::Stalled: return "stalled";
  }
  return "unknown";
}

void SolverOptions::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("SolverOptions: ") + what);
  };
  require(atol > 0.0, "atol must be positive");
  require(rtol >= 0.0, "rtol must be nonnegative");
  require(theta > 0.0 && theta < 1.0, "theta must lie in (0, 1)");
  require(eta1 > 0.0 && eta1 <= eta2 && eta2 < 1.0, "need 0 < eta1 <= eta2 < 1");
  require(gamma1 > 1.0, "gamma1 must exceed 1");
  require(gamma2 > 1.0, "gamma2 must exceed 1");
  require(gamma3 > 0.0 && gamma3 <= 1.0, "gamma3 must lie in (0, 1]");
  require(gamma_shrink > 0.0 && gamma_shrink < 1.0, "gamma_shrink must lie in (0, 1)");
  require(sigma_min > 0.0 && sigma0 >= sigma_min, "need 0 < sigma_min <= sigma0");
  require(sigma_max > sigma0, "sigma_max must exceed sigma0");
  require(r2_sigma0 > 0.0, "r2_sigma0 must be positive");
  require(radius0 > 0.0 && radius_min >= 0.0 && radius_max >= radius0,
          "need radius_min >= 0, radius0 > 0, radius_max >= radius0");
  require(beta >= 1.0, "beta must be at least 1");
  require(alpha > 0.0, "alpha must be positive");
  require(max_outer >= 0, "max_outer must be nonnegative");
  require(max_inner >= 1, "max_inner must be at least 1");
  require(power_tol > 0.0 && power_max_iter >= 1, "invalid power iteration settings");
}

double update_sigma(double sigma, double rho, const SolverOptions& opts) {
  if (rho >= opts.eta2) return std::max(opts.gamma3 * sigma, opts.sigma_min);
  if (rho >= opts.eta1) return sigma;
  return opts.gamma1 * sigma;
}

double update_radius(double radius, double rho, const SolverOptions& opts) {
  if (rho >= opts.eta2) return std::min(opts.gamma2 * radius, opts.radius_max);
  if (rho >= opts.eta1) return radius;
  return opts.gamma_shrink * radius;
}

namespace {

enum class Variant { LevenbergMarquardt, TrustRegion };

struct Trial {
  double f = kInf;
  double h = kInf;
  Vector residual;
};

Trial evaluate_trial(LeastSquaresProblem& problem, const Regularizer& reg, const Vector& x) {
  Trial t;
  t.h = reg(x);
  try {
    ObjectiveValue obj = objective(problem, x);
    t.f = obj.f;
    t.residual = std::move(obj.residual);
  } catch (const EvaluationError&) {
    t.f = kInf;
  }
  return t;
}

SolverStats levenberg_marquardt(LeastSquaresProblem& problem, const Regularizer& reg,
                                const Vector& x0, const SolverOptions& opts, Variant variant) {
  const bool trust_region = variant == Variant::TrustRegion;
  const char* name = trust_region ? "LMTR" : "LM";
  opts.validate();
  const Index n = problem.num_variables();
  if (x0.size() != n) throw std::invalid_argument(std::string(name) + ": x0 has wrong length");
  reg.validate(n);
  const double h0 = reg(x0);
  if (!std::isfinite(h0)) throw std::invalid_argument(std::string(name) + ": h(x0) must be finite");

  const auto start = std::chrono::steady_clock::now();
  const auto counters0 = problem.counters();
  const std::int64_t prox0 = reg.prox_calls();
  auto evaluations = [&] { return problem.counters().residual - counters0.residual; };

  SolverStats stats;
  stats.solver = name;
  stats.status = SolverStatus::MaxIterations;

  ObjectiveValue obj0 = objective(problem, x0);
  stats.history.push_back({evaluations(), obj0.f, h0, true});

  Vector x = x0;
  std::optional<GaussNewtonModel> model;
  model.emplace(problem, reg, x, std::move(obj0.residual));
  double jac_norm = spectral_norm(problem, x, opts.power_tol, opts.power_max_iter);

  double sigma = opts.sigma0;
  double radius = opts.radius0;
  double xi0 = 0.0;

  for (int k = 0;; ++k) {
    if (k >= opts.max_outer) {
      stats.status = SolverStatus::MaxIterations;
      break;
    }
    const double f = model->f();
    const double h = model->h();
    const double jac_sq = jac_norm * jac_norm;

    double nu;
    if (trust_region) {
      nu = opts.theta / (jac_sq + 1.0 / (opts.alpha * radius));
      model->set_sigma(0.0);
      model->set_radius(radius);
    } else {
      nu = opts.theta / (jac_sq + sigma);
      model->set_sigma(sigma);
      model->set_radius(std::nullopt);
    }

    const FirstProxStep first = first_prox_step(*model, nu);
    if (k == 0) xi0 = first.xi;
    stats.xi = first.xi;
    const double tol = opts.atol + ((trust_region || opts.lm_relative_stop)
                                        ? opts.rtol * std::sqrt(xi0)
                                        : 0.0);
    if (std::sqrt(first.xi) < tol) {
      stats.status = SolverStatus::FirstOrder;
      break;
    }

    InnerOptions inner;
    inner.stop = inner_stop_threshold(k, first.xi, opts.atol);
    inner.max_inner = opts.max_inner;
    inner.sqrt_stop = opts.inner_sqrt_stop;
    inner.theta = opts.theta;
    inner.eta1 = opts.eta1;
    inner.eta2 = opts.eta2;
    inner.gamma1 = opts.gamma1;
    inner.gamma3 = opts.gamma3;
    double inner_radius = kInf;
    if (trust_region) {
      inner_radius = std::min(opts.beta * first.step.lpNorm<Eigen::Infinity>(), radius);
      model->set_radius(inner_radius);
      inner.curvature = jac_sq > 0.0 ? jac_sq : 1.0;
    } else {
      inner.curvature = jac_sq + sigma;
    }
    const InnerResult sub = r2_solve(*model, first.step, inner);
    ++stats.iterations;
    stats.inner_iterations += sub.iterations;

    const Vector& s = sub.step;
    Vector x_trial = x + s;
    Trial trial = evaluate_trial(problem, reg, x_trial);
    stats.history.push_back({evaluations(), trial.f, trial.h, false});

    const double pred = sub.model_decrease;
    const double actual = f + h - (trial.f + trial.h);
    double rho = 0.0;
    if (std::isfinite(trial.f) && std::isfinite(trial.h) && std::isfinite(sub.psi) &&
        pred >= 1e-15 * (1.0 + std::abs(f + h))) {
      rho = actual / pred;
    }
    const bool accepted = rho >= opts.eta1;

    IterationRecord rec;
    rec.iteration = k;
    rec.f = f;
    rec.h = h;
    rec.xi = first.xi;
    rec.parameter = trust_region ? radius : sigma;
    rec.nu = nu;
    rec.inner_radius = inner_radius;
    rec.step_norm = s.norm();
    rec.step_norm_inf = s.lpNorm<Eigen::Infinity>();
    rec.model_decrease = pred;
    rec.trial_objective = trial.f + trial.h;
    rec.rho = rho;
    rec.accepted = accepted;
    rec.inner_iterations = sub.iterations;
    stats.trace.push_back(rec);
    if (opts.callback) opts.callback(rec);

    if (accepted) {
      stats.history.back().accepted = true;
      ++stats.successful;
      x = std::move(x_trial);
      model.emplace(problem, reg, x, std::move(trial.residual));
      jac_norm = spectral_norm(problem, x, opts.power_tol, opts.power_max_iter);
    }

    if (trust_region) {
      radius = update_radius(radius, rho, opts);
      if (radius < opts.radius_min) {
        stats.status = SolverStatus::Stalled;
        break;
      }
    } else {
      sigma = update_sigma(sigma, rho, opts);
      if (sigma > opts.sigma_max) {
        stats.status = SolverStatus::Stalled;
        break;
      }
    }
  }

  stats.x = x;
  stats.f = model->f();
  stats.h = model->h();
  const auto& c = problem.counters();
  stats.residual_evals = c.residual - counters0.residual;
  stats.gradient_evals = c.jtprod - counters0.jtprod;
  stats.jprods = c.jprod - counters0.jprod;
  stats.prox_calls = reg.prox_calls() - prox0;
  stats.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

}  // namespace

SolverStats lm_solve(LeastSquaresProblem& problem, const Regularizer& reg, const Vector& x0,
                     const SolverOptions& opts) {
  return levenberg_marquardt(problem, reg, x0, opts, Variant::LevenbergMarquardt);
}

SolverStats lmtr_solve(LeastSquaresProblem& problem, const Regularizer& reg, const Vector& x0,
                       const SolverOptions& opts) {
  return levenberg_marquardt(problem, reg, x0, opts, Variant::TrustRegion);
}

}  // namespace nlsreg
