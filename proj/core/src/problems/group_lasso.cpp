#include "nlsreg/problems/group_lasso.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace nlsreg::problems {

GroupLassoInstance generate_group_lasso(std::uint64_t seed, const GroupLassoConfig& config) {
  const Index m = config.observations;
  const Index n = config.signal_length;
  if (m < 1 || n < 1) throw std::invalid_argument("group lasso: empty dimensions");
  if (m > n) throw std::invalid_argument("group lasso: need observations <= signal_length");
  if (config.groups < 1 || n % config.groups != 0)
    throw std::invalid_argument("group lasso: signal length must be divisible by group count");
  if (config.active_groups < 0 || config.active_groups > config.groups)
    throw std::invalid_argument("group lasso: active groups out of range");
  if (!(config.noise >= 0.0)) throw std::invalid_argument("group lasso: negative noise");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  GroupLassoInstance inst;
  inst.seed = seed;
  inst.config = config;
  inst.groups = contiguous_groups(n, config.groups);

  Matrix gauss(n, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < n; ++i) gauss(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(gauss);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, m);
  inst.A = q.transpose();

  std::vector<Index> order(static_cast<std::size_t>(config.groups));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution coin(0.5);
  inst.x_true = Vector::Zero(n);
  for (Index a = 0; a < config.active_groups; ++a) {
    const double value = coin(rng) ? 1.0 : -1.0;
    for (Index i : inst.groups[static_cast<std::size_t>(order[static_cast<std::size_t>(a)])])
      inst.x_true(i) = value;
  }

  Vector noise(m);
  for (Index i = 0; i < m; ++i) noise(i) = config.noise * normal(rng);
  inst.b = inst.A * inst.x_true + noise;
  return inst;
}

GroupLassoSetup make_group_lasso(const GroupLassoInstance& instance, double lambda) {
  validate_partition(instance.groups, instance.A.cols());
  return {std::make_unique<LinearProblem>(instance.A, instance.b),
          Regularizer::group_lasso(lambda, instance.groups), Vector::Zero(instance.A.cols())};
}

}  // namespace nlsreg::problems
