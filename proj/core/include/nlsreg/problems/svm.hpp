#pragma once

#include <cstdint>
#include <memory>

#include "nlsreg/problem.hpp"
#include "nlsreg/regularizer.hpp"

namespace nlsreg::problems {

/// Labeled examples; one row of `features` per example, labels in {-1, +1}.
struct LabeledData {
  Matrix features;
  Vector labels;
};

struct SvmInstance {
  std::uint64_t seed = 0;
  LabeledData train;
  LabeledData test;
};

struct SyntheticSvmConfig {
  Index train = 400;
  Index test = 100;
  Index dimension = 50;
  /// Leading features whose mean depends on the class.
  Index informative = 5;
  /// Class mean on informative features is +-separation.
  double separation = 1.5;
};

/// Two Gaussian clusters centered at +-separation on the informative
/// features, unit variance everywhere, balanced classes.
SvmInstance generate_svm(std::uint64_t seed, const SyntheticSvmConfig& config = {});

/// Smoothed hinge-type residual F(x) = 1 - tanh(b .* (A x)).
class SvmProblem final : public LeastSquaresProblem {
 public:
  SvmProblem(Matrix features, Vector labels);

  const Matrix& features() const { return A_; }
  const Vector& labels() const { return b_; }

 protected:
  void eval_residual(const Vector& x, Vector& out) override;
  void eval_jprod(const Vector& x, const Vector& v, Vector& out) override;
  void eval_jtprod(const Vector& x, const Vector& w, Vector& out) override;

 private:
  // b .* sech^2(b .* A x) for the last x seen.
  const Vector& weights(const Vector& x);

  Matrix A_;
  Vector b_;
  Vector cached_x_;
  Vector margins_;
  Vector weights_;
  bool weights_valid_ = false;
};

/// Fraction of rows whose predicted sign matches the label; a zero score
/// counts as +1.
double accuracy(const LabeledData& data, const Vector& x);

struct SvmSetup {
  std::unique_ptr<SvmProblem> problem;
  Regularizer regularizer;
  Vector x0;
};

/// Problem on the training split with the l1/2 regularizer and x0 = ones.
SvmSetup make_svm(const SvmInstance& instance, double lambda = 1e-1);

}  // namespace nlsreg::problems
