#include "nlsreg/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nlsreg {
namespace {

void check_context(const Vector& qbar, const ShiftContext& ctx) {
  if (ctx.base.size() != qbar.size()) {
    throw std::invalid_argument("shifted prox: base and argument sizes differ");
  }
  if (ctx.region) {
    if (ctx.region->center.size() != qbar.size()) {
      throw std::invalid_argument("shifted prox: trust-region center size mismatch");
    }
    if (!(ctx.region->radius >= 0.0)) {
      throw std::invalid_argument("shifted prox: trust-region radius must be >= 0");
    }
  }
}

double lower_bound(const ShiftContext& ctx, Index i) {
  return ctx.region ? ctx.region->center[i] - ctx.region->radius : -kInf;
}

double upper_bound(const ShiftContext& ctx, Index i) {
  return ctx.region ? ctx.region->center[i] + ctx.region->radius : kInf;
}

double lhalf_objective(double v, double q, double c) {
  return 0.5 * (v - q) * (v - q) + c * std::sqrt(std::abs(v));
}

// Candidate ordering: smaller objective, then smaller |v|, then v >= 0.
bool better_candidate(double v, double fv, double best, double fbest) {
  if (fv < fbest) return true;
  if (fv > fbest) return false;
  if (std::abs(v) < std::abs(best)) return true;
  if (std::abs(v) > std::abs(best)) return false;
  return v >= 0.0 && best < 0.0;
}

// Nonzero stationary point of 0.5 (v - q)^2 + c |v|^{1/2} on the side of q.
double lhalf_stationary(double q, double c) {
  const double a = std::abs(q);
  double arg = 0.25 * c * std::pow(a / 3.0, -1.5);
  arg = std::clamp(arg, -1.0, 1.0);
  const double mu = std::acos(arg);
  const double mag =
      (2.0 / 3.0) * a * (1.0 + std::cos((2.0 / 3.0) * std::numbers::pi - (2.0 / 3.0) * mu));
  return q > 0.0 ? mag : -mag;
}

// Box {v : ||v - center||_inf <= radius} as per-component clamp.
Vector clamp_to_box(const Vector& y, const Vector& center, double radius) {
  return y.cwiseMax((center.array() - radius).matrix())
      .cwiseMin((center.array() + radius).matrix());
}

constexpr int kMaxBisection = 200;
constexpr Index kMaxScanPoints = 1'000'000;

}  // namespace

void validate_partition(const GroupPartition& groups, Index n) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  Index covered = 0;
  for (const auto& group : groups) {
    if (group.empty()) throw std::invalid_argument("group partition: empty group");
    for (Index i : group) {
      if (i < 0 || i >= n) {
        throw std::invalid_argument("group partition: index " + std::to_string(i) +
                                    " out of range");
      }
      if (seen[static_cast<std::size_t>(i)]) {
        throw std::invalid_argument("group partition: index " + std::to_string(i) +
                                    " appears twice");
      }
      seen[static_cast<std::size_t>(i)] = 1;
      ++covered;
    }
  }
  if (covered != n) throw std::invalid_argument("group partition does not cover all variables");
}

GroupPartition contiguous_groups(Index n, Index count) {
  if (count <= 0 || n % count != 0) {
    throw std::invalid_argument("contiguous_groups: " + std::to_string(n) +
                                " variables cannot be split into " +
                                std::to_string(count) + " equal groups");
  }
  const Index size = n / count;
  GroupPartition groups(static_cast<std::size_t>(count));
  for (Index g = 0; g < count; ++g) {
    auto& group = groups[static_cast<std::size_t>(g)];
    group.reserve(static_cast<std::size_t>(size));
    for (Index i = 0; i < size; ++i) group.push_back(g * size + i);
  }
  return groups;
}

double soft_threshold(double value, double threshold) {
  if (value > threshold) return value - threshold;
  if (value < -threshold) return value + threshold;
  return 0.0;
}

double lhalf_threshold(double c) {
  return std::cbrt(54.0) / 4.0 * std::pow(2.0 * c, 2.0 / 3.0);
}

double prox_lhalf_scalar(double q, double c) {
  if (c <= 0.0) return q;
  if (std::abs(q) <= lhalf_threshold(c)) return 0.0;
  return lhalf_stationary(q, c);
}

double prox_lhalf_scalar_box(double q, double c, double lower, double upper) {
  if (lower > upper) throw std::invalid_argument("prox_lhalf_scalar_box: empty interval");
  if (c <= 0.0) return std::clamp(q, lower, upper);
  if (lower == -kInf && upper == kInf) return prox_lhalf_scalar(q, c);

  double best = std::isfinite(lower) ? lower : upper;
  double fbest = lhalf_objective(best, q, c);
  auto consider = [&](double v) {
    if (v < lower || v > upper || !std::isfinite(v)) return;
    const double fv = lhalf_objective(v, q, c);
    if (better_candidate(v, fv, best, fbest)) {
      best = v;
      fbest = fv;
    }
  };
  consider(lower);
  consider(upper);
  consider(0.0);
  if (q != 0.0) consider(lhalf_stationary(q, c));
  return best;
}

Vector prox_l1_box(const Vector& qbar, double nu_lambda, const ShiftContext& ctx) {
  if (nu_lambda < 0.0) throw std::invalid_argument("prox_l1_box: nu*lambda must be >= 0");
  check_context(qbar, ctx);
  Vector t(qbar.size());
  for (Index i = 0; i < qbar.size(); ++i) {
    const double v =
        std::clamp(soft_threshold(qbar[i], nu_lambda), lower_bound(ctx, i), upper_bound(ctx, i));
    t[i] = v - ctx.base[i];
  }
  return t;
}

Vector prox_lhalf_box(const Vector& qbar, double nu_lambda, const ShiftContext& ctx) {
  if (nu_lambda < 0.0) throw std::invalid_argument("prox_lhalf_box: nu*lambda must be >= 0");
  check_context(qbar, ctx);
  Vector t(qbar.size());
  for (Index i = 0; i < qbar.size(); ++i) {
    const double v = ctx.region
                         ? prox_lhalf_scalar_box(qbar[i], nu_lambda, lower_bound(ctx, i),
                                                 upper_bound(ctx, i))
                         : prox_lhalf_scalar(qbar[i], nu_lambda);
    t[i] = v - ctx.base[i];
  }
  return t;
}

Vector prox_zero_box(const Vector& qbar, const ShiftContext& ctx) {
  check_context(qbar, ctx);
  if (!ctx.region) return qbar - ctx.base;
  return clamp_to_box(qbar, ctx.region->center, ctx.region->radius) - ctx.base;
}

Vector prox_l2(const Vector& y, double nu_lambda) {
  if (nu_lambda < 0.0) throw std::invalid_argument("prox_l2: nu*lambda must be >= 0");
  const double norm = y.norm();
  if (norm <= nu_lambda) return Vector::Zero(y.size());
  return (1.0 - nu_lambda / norm) * y;
}

const char* to_string(TRProxCase c) {
  switch (c) {
    case TRProxCase::Degenerate: return "degenerate";
    case TRProxCase::CenterOutside: return "center-outside";
    case TRProxCase::InteriorRoot: return "interior-root";
    case TRProxCase::InteriorDeadZone: return "interior-dead-zone";
    case TRProxCase::BoundaryPinned: return "boundary-pinned";
    case TRProxCase::BoundarySearch: return "boundary-search";
    case TRProxCase::BoundaryDeadZone: return "boundary-dead-zone";
  }
  return "unknown";
}

double tr_prox_l2_objective(const TRProxQuery& query, const Vector& v) {
  return 0.5 / query.nu * (v - query.qbar).squaredNorm() + query.lambda * v.norm();
}

namespace {

// For zeta = nu lambda + r, the candidate v(zeta) = proj_box(c qbar) with
// c = r / zeta; qbar - nu z(zeta) = (zeta / r) v(zeta).
Vector candidate_for_offset(const TRProxQuery& q, double r) {
  const double zeta = q.nu * q.lambda + r;
  return clamp_to_box((r / zeta) * q.qbar, q.center, q.radius);
}

// Same sign as g(nu lambda + r): r - ||v(zeta)||.
double scaled_root_function(const TRProxQuery& q, double r) {
  return r - candidate_for_offset(q, r).norm();
}

struct RootSearch {
  bool found = false;
  double r = 0.0;
  int iterations = 0;
};

// Bisection on r in (lo, hi) given scaled_root_function(lo) < 0 <= (hi).
RootSearch bisect(const TRProxQuery& q, double lo, double hi) {
  const double nl = q.nu * q.lambda;
  RootSearch out;
  for (int it = 0; it < kMaxBisection; ++it) {
    out.iterations = it + 1;
    const double mid = 0.5 * (lo + hi);
    const double zeta = nl + mid;
    const double g = tr_prox_l2_root_function(q, zeta);
    if (!std::isfinite(g)) throw std::runtime_error("tr_prox_l2: non-finite root function");
    if (std::abs(g) <= 1e-10 * (1.0 + zeta) || (hi - lo) <= 1e-12) {
      out.found = true;
      out.r = mid;
      return out;
    }
    if (g < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.found = true;
  out.r = 0.5 * (lo + hi);
  return out;
}

// Largest c with c qbar inside the box; the center must be such that 0 lies in
// the box and the ray c qbar enters its interior.
double max_interior_scale(const TRProxQuery& q) {
  double c = kInf;
  for (Index i = 0; i < q.qbar.size(); ++i) {
    const double qi = q.qbar[i];
    if (qi > 0.0) {
      c = std::min(c, (q.center[i] + q.radius) / qi);
    } else if (qi < 0.0) {
      c = std::min(c, (q.center[i] - q.radius) / qi);
    }
  }
  return c;
}

}  // namespace

double tr_prox_l2_root_function(const TRProxQuery& query, double zeta) {
  const double nl = query.nu * query.lambda;
  const double r = zeta - nl;
  if (!(r > 0.0)) throw std::domain_error("tr_prox_l2_root_function: zeta must exceed nu*lambda");
  const Vector v = candidate_for_offset(query, r);
  return zeta - (zeta / r) * v.norm();
}

TRProxResult tr_prox_l2(const TRProxQuery& query) {
  const Index d = query.qbar.size();
  if (query.center.size() != d) throw std::invalid_argument("tr_prox_l2: center size mismatch");
  if (!(query.nu > 0.0) || !(query.lambda > 0.0) || !(query.radius >= 0.0) ||
      !std::isfinite(query.nu) || !std::isfinite(query.lambda) ||
      !std::isfinite(query.radius)) {
    throw std::invalid_argument("tr_prox_l2: nu, lambda must be positive and radius >= 0");
  }
  if (!query.qbar.allFinite() || !query.center.allFinite()) {
    throw std::invalid_argument("tr_prox_l2: non-finite input");
  }

  TRProxResult out;
  if (query.radius == 0.0) {
    out.v = query.center;
    out.which = TRProxCase::Degenerate;
    out.zero_solution = query.center.isZero(0.0);
    return out;
  }

  const double nl = query.nu * query.lambda;
  const double qnorm = query.qbar.norm();
  const double xinf = query.center.lpNorm<Eigen::Infinity>();
  const double ball_bound = query.center.norm() + query.radius * std::sqrt(static_cast<double>(d));
  const Vector zero = Vector::Zero(d);

  auto set_zero = [&](TRProxCase which) {
    out.v = zero;
    out.which = which;
    out.zero_solution = true;
  };
  auto finish_root = [&](const RootSearch& rs, double lo, double hi) {
    out.bracket_lo = nl + lo;
    out.bracket_hi = nl + hi;
    out.root_iterations = rs.iterations;
    out.zeta = nl + rs.r;
    out.v = candidate_for_offset(query, rs.r);
    out.zero_solution = false;
  };
  // Guaranteed-root search on r in (lo, hi): widen hi until g(hi) > 0 strictly.
  auto guaranteed_root = [&](double lo, double hi) {
    while (scaled_root_function(query, hi) <= 0.0) hi *= 2.0;
    finish_root(bisect(query, lo, hi), lo, hi);
  };

  if (xinf > query.radius) {
    // Zero is infeasible. g -> -inf as zeta -> nu lambda, g > 0 past nu lambda
    // + ||x|| + Delta sqrt(d).
    out.which = TRProxCase::CenterOutside;
    const Vector nearest = clamp_to_box(zero, query.center, query.radius);
    const double dist = nearest.norm();
    double lo = 0.5 * dist;
    while (scaled_root_function(query, lo) >= 0.0 && lo > 0.0) lo *= 0.5;
    guaranteed_root(lo, std::max(ball_bound, 2.0 * lo));
    return out;
  }

  const bool interior = xinf < query.radius;
  if (!interior) {
    // Boundary: ||x||_inf = Delta.
    const Vector proj = clamp_to_box(query.qbar, query.center, query.radius) - query.center;
    if (proj == -query.center) {
      set_zero(TRProxCase::BoundaryPinned);
      return out;
    }
  }
  if (qnorm <= nl) {
    set_zero(interior ? TRProxCase::InteriorDeadZone : TRProxCase::BoundaryDeadZone);
    return out;
  }

  const double c_max = max_interior_scale(query);
  const bool ray_enters = interior || c_max > 0.0;
  if (ray_enters) {
    // For small zeta, c qbar stays inside the box and g < 0 until zeta = ||qbar||.
    out.which = interior ? TRProxCase::InteriorRoot : TRProxCase::BoundarySearch;
    const double c_lo = 0.5 * std::min(c_max, 1.0 - nl / qnorm);
    const double lo = c_lo * nl / (1.0 - c_lo);
    const double hi = std::max(std::min(qnorm - nl, ball_bound), lo);
    guaranteed_root(lo, hi);
  } else {
    // The ray misses the interior: a root may exist in
    // (nu lambda, min(nu lambda + ||x|| + Delta sqrt(d), ||qbar||)].
    out.which = TRProxCase::BoundarySearch;
    const double hi = std::min(ball_bound, qnorm - nl);
    const double step = 1e-4 * nl;
    const Index points = std::clamp<Index>(static_cast<Index>(std::ceil(hi / step)), 2, kMaxScanPoints);
    const double h = hi / static_cast<double>(points);
    double prev_r = h;
    double prev_g = scaled_root_function(query, prev_r);
    bool found = false;
    double best_r = prev_r;
    double best_abs = std::abs(prev_g);
    for (Index k = 2; k <= points && !found; ++k) {
      const double r = h * static_cast<double>(k);
      const double g = scaled_root_function(query, r);
      if (std::abs(g) < best_abs) {
        best_abs = std::abs(g);
        best_r = r;
      }
      if (prev_g < 0.0 && g >= 0.0) {
        finish_root(bisect(query, prev_r, r), prev_r, r);
        found = true;
      }
      prev_r = r;
      prev_g = g;
    }
    if (!found) {
      // No sign change: the root, if any, is a touching zero near best_r.
      if (best_abs <= 1e-8 * (1.0 + nl + best_r)) {
        RootSearch rs;
        rs.found = true;
        rs.r = best_r;
        finish_root(rs, 0.0, hi);
      } else {
        set_zero(TRProxCase::BoundarySearch);
        return out;
      }
    }
  }

  // Zero is feasible in every branch that reaches here; keep it if it is at
  // least as good as the root candidate.
  if (tr_prox_l2_objective(query, zero) <= tr_prox_l2_objective(query, out.v)) {
    out.v = zero;
    out.zero_solution = true;
  }
  return out;
}

Vector tr_prox_group_lasso(const Vector& qbar, double nu, double lambda,
                           const GroupPartition& groups, const ShiftContext& ctx) {
  if (!(nu > 0.0) || lambda < 0.0) {
    throw std::invalid_argument("tr_prox_group_lasso: nu must be > 0 and lambda >= 0");
  }
  check_context(qbar, ctx);
  Vector v(qbar.size());
  for (const auto& group : groups) {
    const Index size = static_cast<Index>(group.size());
    Vector slice(size);
    for (Index k = 0; k < size; ++k) slice[k] = qbar[group[static_cast<std::size_t>(k)]];
    Vector out;
    if (!ctx.region) {
      out = prox_l2(slice, nu * lambda);
    } else if (lambda == 0.0) {
      Vector center(size);
      for (Index k = 0; k < size; ++k) center[k] = ctx.region->center[group[static_cast<std::size_t>(k)]];
      out = clamp_to_box(slice, center, ctx.region->radius);
    } else {
      TRProxQuery query;
      query.qbar = slice;
      query.nu = nu;
      query.lambda = lambda;
      query.center.resize(size);
      for (Index k = 0; k < size; ++k) {
        query.center[k] = ctx.region->center[group[static_cast<std::size_t>(k)]];
      }
      query.radius = ctx.region->radius;
      out = tr_prox_l2(query).v;
    }
    for (Index k = 0; k < size; ++k) v[group[static_cast<std::size_t>(k)]] = out[k];
  }
  return v - ctx.base;
}

}  // namespace nlsreg
