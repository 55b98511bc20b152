#pragma once

#include <cstdint>
#include <memory>

#include "nlsreg/problem.hpp"
#include "nlsreg/prox.hpp"
#include "nlsreg/regularizer.hpp"

namespace nlsreg::problems {

struct GroupLassoConfig {
  Index observations = 200;
  Index signal_length = 512;
  Index groups = 16;
  Index active_groups = 5;
  /// Standard deviation of the Gaussian observation noise.
  double noise = 0.01;
};

/// min 0.5 ||A x - b||^2 + lambda sum_i ||x_[i]||_2 with A having orthonormal
/// rows and a group-sparse ground truth.
struct GroupLassoInstance {
  std::uint64_t seed = 0;
  GroupLassoConfig config;
  Matrix A;
  Vector b;
  Vector x_true;
  GroupPartition groups;
};

/// Draws A from the QR factorization of a Gaussian matrix, picks
/// `active_groups` groups and fills each with a single value from {-1, 1}.
GroupLassoInstance generate_group_lasso(std::uint64_t seed, const GroupLassoConfig& config = {});

struct GroupLassoSetup {
  std::unique_ptr<LinearProblem> problem;
  Regularizer regularizer;
  Vector x0;
};

/// Problem F(x) = A x - b, group-lasso regularizer and x0 = 0.
GroupLassoSetup make_group_lasso(const GroupLassoInstance& instance, double lambda = 1e-2);

}  // namespace nlsreg::problems
