#include "nlsreg/problems/fh.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace nlsreg::problems {

namespace {

constexpr int kParams = 5;

// State (V, W) followed by the 2x5 sensitivity block, row-major.
using State = std::array<double, 2 + 2 * kParams>;

struct Rhs {
  double x1, x2, x3, x4, x5;
  bool sensitivities;

  State operator()(const State& y) const {
    State d{};
    const double V = y[0];
    const double W = y[1];
    const double cubic = V - V * V * V / 3.0 - W + x1;
    const double linear = x3 * V - x4 * W + x5;
    d[0] = cubic / x2;
    d[1] = x2 * linear;
    if (!sensitivities) return d;

    const double fvv = (1.0 - V * V) / x2;
    const double fvw = -1.0 / x2;
    const double fwv = x2 * x3;
    const double fww = -x2 * x4;
    const std::array<double, kParams> fvx{1.0 / x2, -cubic / (x2 * x2), 0.0, 0.0, 0.0};
    const std::array<double, kParams> fwx{0.0, linear, x2 * V, -x2 * W, x2};
    for (int j = 0; j < kParams; ++j) {
      const double sv = y[2 + j];
      const double sw = y[2 + kParams + j];
      d[2 + j] = fvv * sv + fvw * sw + fvx[j];
      d[2 + kParams + j] = fwv * sv + fww * sw + fwx[j];
    }
    return d;
  }
};

void axpy(State& out, const State& y, double a, const State& k, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) out[i] = y[i] + a * k[i];
}

void check_grid(const FHGrid& grid) {
  if (grid.intervals < 1 || grid.steps_per_sample < 1 || !(grid.t_end > 0.0))
    throw std::invalid_argument("fh: invalid grid");
}

FHSensitivity integrate(const Vector& x, const FHGrid& grid, bool sensitivities) {
  if (x.size() != kParams) throw std::invalid_argument("fh: expected 5 parameters");
  check_grid(grid);
  if (!(std::abs(x(1)) >= 1e-8)) throw EvaluationError("fh: |x2| too small for the V equation");

  const Rhs rhs{x(0), x(1), x(2), x(3), x(4), sensitivities};
  const std::size_t len = sensitivities ? State{}.size() : 2;
  const Index samples = grid.intervals + 1;
  const double h =
      grid.t_end / (static_cast<double>(grid.intervals) * static_cast<double>(grid.steps_per_sample));

  FHSensitivity out;
  out.trajectory.v.resize(samples);
  out.trajectory.w.resize(samples);
  if (sensitivities) out.jacobian.resize(2 * samples, kParams);

  State y{};
  y[0] = grid.v0;
  y[1] = grid.w0;
  auto record = [&](Index i) {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) throw EvaluationError("fh: state diverged");
    out.trajectory.v(i) = y[0];
    out.trajectory.w(i) = y[1];
    if (!sensitivities) return;
    for (int j = 0; j < kParams; ++j) {
      out.jacobian(i, j) = y[2 + j];
      out.jacobian(samples + i, j) = y[2 + kParams + j];
    }
  };

  record(0);
  State tmp{};
  for (Index i = 1; i < samples; ++i) {
    for (int step = 0; step < grid.steps_per_sample; ++step) {
      const State k1 = rhs(y);
      axpy(tmp, y, 0.5 * h, k1, len);
      const State k2 = rhs(tmp);
      axpy(tmp, y, 0.5 * h, k2, len);
      const State k3 = rhs(tmp);
      axpy(tmp, y, h, k3, len);
      const State k4 = rhs(tmp);
      for (std::size_t c = 0; c < len; ++c)
        y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
    }
    record(i);
  }
  if (sensitivities && !out.jacobian.allFinite()) throw EvaluationError("fh: sensitivities diverged");
  return out;
}

}  // namespace

FHTrajectory fh_forward(const Vector& x, const FHGrid& grid) {
  return integrate(x, grid, false).trajectory;
}

FHSensitivity fh_sensitivity(const Vector& x, const FHGrid& grid) {
  return integrate(x, grid, true);
}

Vector fh_reference_parameters() {
  Vector x(kParams);
  x << 0.0, 0.2, 1.0, 0.0, 0.0;
  return x;
}

FHInstance generate_fh(const FHGrid& grid, const Vector& x_true) {
  FHInstance inst;
  inst.grid = grid;
  inst.x_true = x_true;
  FHTrajectory data = fh_forward(x_true, grid);
  inst.v_data = std::move(data.v);
  inst.w_data = std::move(data.w);
  return inst;
}

FHProblem::FHProblem(FHInstance instance)
    : LeastSquaresProblem(kParams, 2 * (instance.grid.intervals + 1)),
      instance_(std::move(instance)) {
  check_grid(instance_.grid);
  const Index samples = instance_.grid.intervals + 1;
  if (instance_.v_data.size() != samples || instance_.w_data.size() != samples)
    throw std::invalid_argument("fh: data length does not match the grid");
}

void FHProblem::eval_residual(const Vector& x, Vector& out) {
  const FHTrajectory traj = fh_forward(x, instance_.grid);
  const Index samples = traj.v.size();
  out.resize(2 * samples);
  out.head(samples) = traj.v - instance_.v_data;
  out.tail(samples) = traj.w - instance_.w_data;
}

const Matrix& FHProblem::jacobian(const Vector& x) {
  if (!cache_valid_ || cached_x_ != x) {
    cache_valid_ = false;
    cached_jacobian_ = fh_sensitivity(x, instance_.grid).jacobian;
    cached_x_ = x;
    cache_valid_ = true;
  }
  return cached_jacobian_;
}

void FHProblem::eval_jprod(const Vector& x, const Vector& v, Vector& out) {
  out = jacobian(x) * v;
}

void FHProblem::eval_jtprod(const Vector& x, const Vector& w, Vector& out) {
  out = jacobian(x).transpose() * w;
}

FHSetup make_fh(const FHInstance& instance, double lambda) {
  return {std::make_unique<FHProblem>(instance), Regularizer::l1(lambda),
          Vector::Constant(kParams, 0.5)};
}

}  // namespace nlsreg::problems
