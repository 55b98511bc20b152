#include <chrono>
#include <cmath>
#include <stdexcept>

#include "nlsreg/solvers.hpp"
#include "r2_core.hpp"

namespace nlsreg {
namespace detail {

R2Outcome run_r2(SmoothTerm& smooth, const NonsmoothTerm& nonsmooth, Vector s, double smooth_s,
                 double psi_s, const R2Settings& st) {
  R2Outcome out;
  double sigma = st.sigma0;
  double current_smooth = smooth_s;
  double current_psi = psi_s;

  while (out.iterations < st.max_iter) {
    const double nu = st.theta / (st.curvature + sigma);
    const Vector& g = smooth.gradient();
    const ProxStep prox = nonsmooth.prox(s, -nu * g, nu);
    ++out.iterations;

    const Vector& t = prox.step;
    const double linear_decrease = current_psi - g.dot(t) - prox.value;
    double xi = linear_decrease - 0.5 / nu * t.squaredNorm();
    if (xi < 0.0) xi = 0.0;
    if (out.iterations == 1) out.xi0 = xi;
    out.xi = xi;

    const bool done = st.sqrt_measure
                          ? std::sqrt(xi) < st.atol + st.rtol * std::sqrt(out.xi0)
                          : xi <= st.atol + st.rtol * out.xi0;
    if (done) {
      out.converged = true;
      break;
    }

    Vector trial = s + t;
    const double trial_smooth = smooth.trial_value(trial);
    const double actual = current_smooth + current_psi - (trial_smooth + prox.value);
    const double rho = std::isfinite(trial_smooth) && linear_decrease > 0.0
                           ? actual / linear_decrease
                           : 0.0;
    const bool accepted = rho >= st.eta1;
    if (accepted) {
      smooth.accept_trial();
      s = std::move(trial);
      current_smooth = trial_smooth;
      current_psi = prox.value;
      ++out.successful;
    }

    if (st.observer) {
      IterationRecord rec;
      rec.iteration = out.iterations - 1;
      rec.f = current_smooth;
      rec.h = current_psi;
      rec.xi = xi;
      rec.parameter = sigma;
      rec.nu = nu;
      rec.inner_radius = nonsmooth.radius.value_or(kInf);
      rec.step_norm = t.norm();
      rec.step_norm_inf = t.lpNorm<Eigen::Infinity>();
      rec.model_decrease = linear_decrease;
      rec.trial_objective = trial_smooth + prox.value;
      rec.rho = rho;
      rec.accepted = accepted;
      st.observer(rec);
    }

    if (rho >= st.eta2) {
      sigma = std::max(st.gamma3 * sigma, st.sigma_min);
    } else if (!accepted) {
      sigma = sigma > 0.0 ? st.gamma1 * sigma : std::max(st.curvature, 1e-8);
      if (sigma > st.sigma_max) {
        out.stalled = true;
        break;
      }
    }
  }
  out.s = std::move(s);
  out.smooth = current_smooth;
  out.psi = current_psi;
  return out;
}

}  // namespace detail

namespace {

// phi(s) + 0.5 sigma ||s||^2 for a frozen Gauss-Newton model. Keeps J s + F of
// the current point so each iteration costs one J v, plus one J^T v after a
// successful step.
class GaussNewtonSmooth final : public detail::SmoothTerm {
 public:
  GaussNewtonSmooth(GaussNewtonModel& model, double sigma)
      : model_(model), sigma_(sigma), s_(Vector::Zero(model.size())), r_(model.residual()) {}

  double value_of(const Vector& r, const Vector& s) const {
    return 0.5 * r.squaredNorm() + 0.5 * sigma_ * s.squaredNorm();
  }

  double current_value() const { return value_of(r_, s_); }
  double current_phi() const { return 0.5 * r_.squaredNorm(); }
  const Vector& current_step() const { return s_; }

  double trial_value(const Vector& s) override {
    trial_s_ = s;
    trial_r_ = model_.apply_jacobian(s) + model_.residual();
    return value_of(trial_r_, trial_s_);
  }

  void accept_trial() override {
    s_.swap(trial_s_);
    r_.swap(trial_r_);
    gradient_.reset();
  }

  const Vector& gradient() override {
    if (!gradient_) {
      if (s_.isZero(0.0)) {
        gradient_ = model_.gradient_at_zero();
      } else {
        gradient_ = model_.apply_jacobian_transpose(r_) + sigma_ * s_;
      }
    }
    return *gradient_;
  }

 private:
  GaussNewtonModel& model_;
  double sigma_;
  Vector s_;
  Vector r_;
  Vector trial_s_;
  Vector trial_r_;
  std::optional<Vector> gradient_;
};

// f(x) = 0.5 ||F(x)||^2 through the problem, logging every residual
// evaluation into the solver history.
class ResidualSmooth final : public detail::SmoothTerm {
 public:
  ResidualSmooth(LeastSquaresProblem& problem, const Regularizer& reg, Vector x, Vector residual,
                 std::vector<HistoryEntry>& history, std::int64_t counter_base)
      : problem_(problem),
        reg_(reg),
        x_(std::move(x)),
        residual_(std::move(residual)),
        history_(history),
        counter_base_(counter_base) {}

  double trial_value(const Vector& x) override {
    trial_x_ = x;
    double f = kInf;
    try {
      trial_residual_ = problem_.residual(x);
      f = 0.5 * trial_residual_.squaredNorm();
    } catch (const EvaluationError&) {
      trial_residual_.resize(0);
    }
    HistoryEntry entry;
    entry.evaluation = problem_.counters().residual - counter_base_;
    entry.f = f;
    entry.h = reg_(x);
    history_.push_back(entry);
    return f;
  }

  void accept_trial() override {
    x_.swap(trial_x_);
    residual_.swap(trial_residual_);
    gradient_.reset();
    history_.back().accepted = true;
  }

  const Vector& gradient() override {
    if (!gradient_) gradient_ = problem_.jtprod(x_, residual_);
    return *gradient_;
  }

  const Vector& residual() const { return residual_; }

 private:
  LeastSquaresProblem& problem_;
  const Regularizer& reg_;
  Vector x_;
  Vector residual_;
  Vector trial_x_;
  Vector trial_residual_;
  std::vector<HistoryEntry>& history_;
  std::int64_t counter_base_;
  std::optional<Vector> gradient_;
};

}  // namespace

double inner_stop_threshold(int outer_iteration, double xi, double atol) {
  if (outer_iteration == 0) return 1e-1;
  return std::max(atol, std::min(1e-1, xi / 10.0));
}

InnerResult r2_solve(GaussNewtonModel& model, const Vector& warm_start, const InnerOptions& opts) {
  if (warm_start.size() != model.size()) throw std::invalid_argument("r2_solve: warm start size");
  if (!(opts.stop > 0.0)) throw std::invalid_argument("r2_solve: stop must be positive");
  if (opts.max_inner < 1) throw std::invalid_argument("r2_solve: max_inner must be >= 1");

  const Regularizer& reg = model.regularizer();
  const std::int64_t prox_before = reg.prox_calls();
  GaussNewtonSmooth smooth(model, model.sigma());

  double start_smooth = smooth.current_value();
  double start_psi = model.h();
  const double m0 = start_smooth + start_psi;
  if (!warm_start.isZero(0.0)) {
    const double ws_smooth = smooth.trial_value(warm_start);
    const double ws_psi = model.psi(warm_start);
    if (ws_smooth + ws_psi <= m0) {
      smooth.accept_trial();
      start_smooth = ws_smooth;
      start_psi = ws_psi;
    }
  }

  detail::NonsmoothTerm nonsmooth{&reg, model.x(), model.radius()};
  detail::R2Settings st;
  st.atol = opts.stop;
  st.sqrt_measure = opts.sqrt_stop;
  st.max_iter = opts.max_inner;
  st.theta = opts.theta;
  st.curvature = opts.curvature;
  st.sigma0 = 0.0;
  st.sigma_min = 0.0;
  st.eta1 = opts.eta1;
  st.eta2 = opts.eta2;
  st.gamma1 = opts.gamma1;
  st.gamma3 = opts.gamma3;
  const detail::R2Outcome run =
      detail::run_r2(smooth, nonsmooth, smooth.current_step(), start_smooth, start_psi, st);

  InnerResult out;
  out.step = run.s;
  out.phi = smooth.current_phi();
  out.psi = run.psi;
  out.model_decrease = model.f() + model.h() - (out.phi + out.psi);
  out.xi = run.xi;
  out.iterations = run.iterations;
  out.prox_calls = static_cast<int>(reg.prox_calls() - prox_before);
  out.converged = run.converged;
  out.stalled = !run.converged && !(out.model_decrease > 0.0);
  return out;
}

SolverStats r2_minimize(LeastSquaresProblem& problem, const Regularizer& reg, const Vector& x0,
                        const SolverOptions& opts) {
  opts.validate();
  const Index n = problem.num_variables();
  if (x0.size() != n) throw std::invalid_argument("r2_minimize: x0 has wrong length");
  reg.validate(n);
  const double h0 = reg(x0);
  if (!std::isfinite(h0)) throw std::invalid_argument("r2_minimize: h(x0) must be finite");

  const auto start = std::chrono::steady_clock::now();
  const auto counters0 = problem.counters();
  const std::int64_t prox0 = reg.prox_calls();

  SolverStats stats;
  stats.solver = "R2";
  const ObjectiveValue obj0 = objective(problem, x0);
  stats.history.push_back({problem.counters().residual - counters0.residual, obj0.f, h0, true});

  ResidualSmooth smooth(problem, reg, x0, obj0.residual, stats.history, counters0.residual);
  detail::NonsmoothTerm nonsmooth{&reg, Vector::Zero(n), std::nullopt};
  detail::R2Settings st;
  st.atol = opts.atol;
  st.rtol = opts.rtol;
  st.sqrt_measure = true;
  st.max_iter = opts.max_outer;
  st.theta = 1.0;
  st.curvature = 0.0;
  st.sigma0 = opts.r2_sigma0;
  st.sigma_min = 1e-12;
  st.sigma_max = opts.sigma_max;
  st.eta1 = opts.eta1;
  st.eta2 = opts.eta2;
  st.gamma1 = opts.gamma1;
  st.gamma3 = opts.gamma3;
  st.observer = [&](const IterationRecord& rec) {
    stats.trace.push_back(rec);
    if (opts.callback) opts.callback(rec);
  };
  const detail::R2Outcome run = detail::run_r2(smooth, nonsmooth, x0, obj0.f, h0, st);

  stats.status = run.converged ? SolverStatus::FirstOrder
                 : run.stalled ? SolverStatus::Stalled
                               : SolverStatus::MaxIterations;
  stats.x = run.s;
  stats.f = run.smooth;
  stats.h = run.psi;
  stats.xi = run.xi;
  stats.iterations = run.iterations;
  stats.successful = run.successful;
  const auto& c = problem.counters();
  stats.residual_evals = c.residual - counters0.residual;
  stats.gradient_evals = c.jtprod - counters0.jtprod;
  stats.jprods = c.jprod - counters0.jprod;
  stats.prox_calls = reg.prox_calls() - prox0;
  stats.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

}  // namespace nlsreg
