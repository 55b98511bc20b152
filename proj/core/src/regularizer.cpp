#include "nlsreg/regularizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlsreg {

const char* to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::Zero: return "zero";
    case RegularizerKind::L1: return "l1";
    case RegularizerKind::LHalf: return "lhalf";
    case RegularizerKind::L2Norm: return "l2";
    case RegularizerKind::GroupLasso: return "group_lasso";
  }
  return "unknown";
}

Regularizer::Regularizer(RegularizerKind kind, double lambda, GroupPartition groups)
    : kind_(kind), lambda_(lambda), groups_(std::move(groups)) {
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) {
    throw std::invalid_argument("regularizer weight must be finite and nonnegative");
  }
}

Regularizer Regularizer::zero() { return Regularizer(RegularizerKind::Zero, 0.0); }
Regularizer Regularizer::l1(double lambda) { return Regularizer(RegularizerKind::L1, lambda); }
Regularizer Regularizer::lhalf(double lambda) {
  return Regularizer(RegularizerKind::LHalf, lambda);
}
Regularizer Regularizer::l2(double lambda) { return Regularizer(RegularizerKind::L2Norm, lambda); }
Regularizer Regularizer::group_lasso(double lambda, GroupPartition groups) {
  if (groups.empty()) throw std::invalid_argument("group lasso needs at least one group");
  return Regularizer(RegularizerKind::GroupLasso, lambda, std::move(groups));
}

void Regularizer::validate(Index n) const {
  if (kind_ == RegularizerKind::GroupLasso) validate_partition(groups_, n);
}

double Regularizer::operator()(const Vector& x) const {
  switch (kind_) {
    case RegularizerKind::Zero:
      return 0.0;
    case RegularizerKind::L1:
      return lambda_ * x.lpNorm<1>();
    case RegularizerKind::LHalf:
      return lambda_ * x.cwiseAbs().cwiseSqrt().sum();
    case RegularizerKind::L2Norm:
      return lambda_ * x.norm();
    case RegularizerKind::GroupLasso: {
      double total = 0.0;
      for (const auto& group : groups_) {
        double sq = 0.0;
        for (Index i : group) sq += x[i] * x[i];
        total += std::sqrt(sq);
      }
      return lambda_ * total;
    }
  }
  return kInf;
}

ProxStep Regularizer::shifted_prox(const Vector& q, double nu, const ShiftContext& ctx) const {
  if (!(nu > 0.0)) throw std::invalid_argument("shifted_prox: nu must be positive");
  if (q.size() != ctx.base.size()) throw std::invalid_argument("shifted_prox: size mismatch");
  ++prox_calls_;
  const Vector qbar = ctx.base + q;
  ProxStep out;
  switch (kind_) {
    case RegularizerKind::Zero:
      out.step = prox_zero_box(qbar, ctx);
      break;
    case RegularizerKind::L1:
      out.step = prox_l1_box(qbar, nu * lambda_, ctx);
      break;
    case RegularizerKind::LHalf:
      out.step = prox_lhalf_box(qbar, nu * lambda_, ctx);
      break;
    case RegularizerKind::L2Norm: {
      GroupPartition whole(1);
      whole[0].reserve(static_cast<std::size_t>(q.size()));
      for (Index i = 0; i < q.size(); ++i) whole[0].push_back(i);
      out.step = tr_prox_group_lasso(qbar, nu, lambda_, whole, ctx);
      break;
    }
    case RegularizerKind::GroupLasso:
      out.step = tr_prox_group_lasso(qbar, nu, lambda_, groups_, ctx);
      break;
  }
  if (!out.step.allFinite()) {
    throw ProxError("proximal operator has no finite minimizer; increase sigma");
  }
  out.value = (*this)(ctx.base + out.step);
  return out;
}

}  // namespace nlsreg
