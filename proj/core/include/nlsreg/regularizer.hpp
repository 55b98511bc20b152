#pragma once

#include <cstdint>
#include <string>

#include "nlsreg/prox.hpp"
#include "nlsreg/types.hpp"

namespace nlsreg {

enum class RegularizerKind { Zero, L1, LHalf, L2Norm, GroupLasso };

const char* to_string(RegularizerKind kind);

/// Result of a shifted prox evaluation: the step t = v - base and h(v), so
/// callers never re-evaluate the nonsmooth term.
struct ProxStep {
  Vector step;
  double value = 0.0;
};

/// Nonsmooth term h = lambda * r(x).
class Regularizer {
 public:
  static Regularizer zero();
  static Regularizer l1(double lambda);
  static Regularizer lhalf(double lambda);
  static Regularizer l2(double lambda);
  static Regularizer group_lasso(double lambda, GroupPartition groups);

  RegularizerKind kind() const { return kind_; }
  double weight() const { return lambda_; }
  const GroupPartition& groups() const { return groups_; }

  /// h(x); never +inf for the shipped kinds.
  double operator()(const Vector& x) const;

  /// t in argmin_t 1/(2 nu) ||t - q||^2 + h(base + t) [+ trust region on
  /// base + t], via the change of variables v = base + t.
  ProxStep shifted_prox(const Vector& q, double nu, const ShiftContext& ctx) const;

  std::int64_t prox_calls() const { return prox_calls_; }
  void reset_counters() const { prox_calls_ = 0; }

  /// Throws std::invalid_argument if the regularizer cannot act on R^n.
  void validate(Index n) const;

 private:
  Regularizer(RegularizerKind kind, double lambda, GroupPartition groups = {});

  RegularizerKind kind_;
  double lambda_;
  GroupPartition groups_;
  mutable std::int64_t prox_calls_ = 0;
};

}  // namespace nlsreg
