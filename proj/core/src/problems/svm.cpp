#include "nlsreg/problems/svm.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nlsreg::problems {

namespace {

LabeledData draw(std::mt19937_64& rng, Index count, const SyntheticSvmConfig& config) {
  std::normal_distribution<double> normal(0.0, 1.0);
  LabeledData data;
  data.features.resize(count, config.dimension);
  data.labels.resize(count);
  for (Index i = 0; i < count; ++i) {
    const double label = i % 2 == 0 ? 1.0 : -1.0;
    data.labels(i) = label;
    for (Index j = 0; j < config.dimension; ++j) {
      const double mean = j < config.informative ? label * config.separation : 0.0;
      data.features(i, j) = mean + normal(rng);
    }
  }
  return data;
}

void check_labels(const Vector& labels) {
  for (Index i = 0; i < labels.size(); ++i)
    if (labels(i) != 1.0 && labels(i) != -1.0)
      throw std::invalid_argument("svm: labels must be exactly +1 or -1");
}

}  // namespace

SvmInstance generate_svm(std::uint64_t seed, const SyntheticSvmConfig& config) {
  if (config.train < 1 || config.test < 0 || config.dimension < 1)
    throw std::invalid_argument("svm: invalid synthetic dimensions");
  if (config.informative < 1 || config.informative > config.dimension)
    throw std::invalid_argument("svm: informative features out of range");
  std::mt19937_64 rng(seed);
  SvmInstance inst;
  inst.seed = seed;
  inst.train = draw(rng, config.train, config);
  inst.test = draw(rng, config.test, config);
  return inst;
}

SvmProblem::SvmProblem(Matrix features, Vector labels)
    : LeastSquaresProblem(features.cols(), features.rows()),
      A_(std::move(features)),
      b_(std::move(labels)) {
  if (b_.size() != A_.rows()) throw std::invalid_argument("svm: one label per row required");
  check_labels(b_);
}

const Vector& SvmProblem::weights(const Vector& x) {
  if (!weights_valid_ || cached_x_.size() != x.size() || cached_x_ != x) {
    cached_x_ = x;
    margins_ = b_.cwiseProduct(A_ * x);
    const Vector t = margins_.array().tanh().matrix();
    weights_ = b_.array() * (1.0 - t.array().square());
    weights_valid_ = true;
  }
  return weights_;
}

void SvmProblem::eval_residual(const Vector& x, Vector& out) {
  weights(x);
  out = (1.0 - margins_.array().tanh()).matrix();
}

void SvmProblem::eval_jprod(const Vector& x, const Vector& v, Vector& out) {
  out = -weights(x).cwiseProduct(A_ * v);
}

void SvmProblem::eval_jtprod(const Vector& x, const Vector& w, Vector& out) {
  out = -(A_.transpose() * weights(x).cwiseProduct(w));
}

double accuracy(const LabeledData& data, const Vector& x) {
  if (data.features.rows() == 0) return 0.0;
  const Vector scores = data.features * x;
  Index correct = 0;
  for (Index i = 0; i < scores.size(); ++i) {
    const double predicted = scores(i) >= 0.0 ? 1.0 : -1.0;
    if (predicted == data.labels(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

SvmSetup make_svm(const SvmInstance& instance, double lambda) {
  auto problem = std::make_unique<SvmProblem>(instance.train.features, instance.train.labels);
  const Index n = problem->num_variables();
  return {std::move(problem), Regularizer::lhalf(lambda), Vector::Ones(n)};
}

}  // namespace nlsreg::problems
