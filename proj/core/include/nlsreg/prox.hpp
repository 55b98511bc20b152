#pragma once

// Shifted proximal operators.
//
// Every operator solves a problem of the form
//
//   min_v  1/(2 nu) ||v - qbar||^2 + h(v)  [+ indicator(||v - c||_inf <= Delta)]
//
// where qbar = x_k + s_j + q is the shifted prox argument and c = x_k is the
// trust-region center. The separable operators work componentwise; the l2 and
// group-lasso operators reduce the box-constrained problem to a scalar root
// search.

#include <optional>
#include <vector>

#include "nlsreg/types.hpp"

namespace nlsreg {

/// l-infinity trust region {v : ||v - center||_inf <= radius}.
struct TrustRegion {
  Vector center;
  double radius = kInf;
};

/// Where the prox is evaluated. `base` is x_k + s_j; the returned step is
/// t = v - base.
struct ShiftContext {
  Vector base;
  std::optional<TrustRegion> region;
};

/// Disjoint groups of variable indices.
using GroupPartition = std::vector<std::vector<Index>>;

/// Throws std::invalid_argument unless `groups` partitions {0, ..., n-1}.
void validate_partition(const GroupPartition& groups, Index n);

/// `count` contiguous groups of equal size over n variables.
GroupPartition contiguous_groups(Index n, Index count);

double soft_threshold(double value, double threshold);

/// argmin_v 0.5 (v - q)^2 + c |v|^{1/2} without bounds, in closed form.
double prox_lhalf_scalar(double q, double c);

/// Same objective restricted to [lower, upper]: the best of the feasible
/// stationary point, zero and both bounds.
double prox_lhalf_scalar_box(double q, double c, double lower, double upper);

/// Threshold below which the unbounded l1/2 prox returns zero.
double lhalf_threshold(double c);

/// Step t for h = lambda ||.||_1; nu_lambda = nu * lambda.
Vector prox_l1_box(const Vector& qbar, double nu_lambda, const ShiftContext& ctx);

/// Step t for h = lambda ||.||_{1/2}^{1/2}; nu_lambda = nu * lambda.
Vector prox_lhalf_box(const Vector& qbar, double nu_lambda, const ShiftContext& ctx);

/// Step t for h = 0: the projection of qbar onto the trust region.
Vector prox_zero_box(const Vector& qbar, const ShiftContext& ctx);

/// Block soft thresholding, the prox of nu_lambda ||.||_2.
Vector prox_l2(const Vector& y, double nu_lambda);

struct TRProxQuery {
  Vector qbar;
  double nu = 1.0;
  double lambda = 1.0;
  Vector center;
  double radius = 1.0;
};

/// Which branch of the case analysis handled a query.
enum class TRProxCase {
  Degenerate,        // radius == 0, v = center
  CenterOutside,     // ||center||_inf > radius, root guaranteed
  InteriorRoot,      // center interior, ||qbar|| > nu lambda
  InteriorDeadZone,  // center interior, ||qbar|| <= nu lambda
  BoundaryPinned,    // ||center||_inf = radius and proj(qbar - center) = -center
  BoundarySearch,    // ||center||_inf = radius, ||qbar|| > nu lambda
  BoundaryDeadZone,  // ||center||_inf = radius, ||qbar|| <= nu lambda
};

const char* to_string(TRProxCase c);

struct TRProxResult {
  Vector v;
  TRProxCase which = TRProxCase::Degenerate;
  /// True when the minimizer is v = 0.
  bool zero_solution = false;
  /// Root of g when one was found, otherwise NaN.
  double zeta = std::numeric_limits<double>::quiet_NaN();
  /// Bracket handed to bisection (NaN when no bisection ran).
  double bracket_lo = std::numeric_limits<double>::quiet_NaN();
  double bracket_hi = std::numeric_limits<double>::quiet_NaN();
  int root_iterations = 0;
};

/// Objective 1/(2 nu) ||v - qbar||^2 + lambda ||v||_2 (indicator excluded).
double tr_prox_l2_objective(const TRProxQuery& query, const Vector& v);

/// g(zeta) = zeta - ||qbar - nu z(zeta)||_2 for zeta > nu lambda.
double tr_prox_l2_root_function(const TRProxQuery& query, double zeta);

/// Unique minimizer of 1/(2 nu)||v - qbar||^2 + lambda ||v||_2 subject to
/// ||v - center||_inf <= radius.
TRProxResult tr_prox_l2(const TRProxQuery& query);

/// Step t for h = lambda sum_i ||x_[i]||_2. Applies prox_l2 (no trust region)
/// or tr_prox_l2 (trust region) to each group slice independently.
Vector tr_prox_group_lasso(const Vector& qbar, double nu, double lambda,
                           const GroupPartition& groups, const ShiftContext& ctx);

}  // namespace nlsreg
