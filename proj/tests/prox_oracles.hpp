#pragma once

// Randomized oracle checks for the proximal operators. Each check draws
// seeded instances, minimizes the prox objective by brute force on a grid and
// compares objective values. Shared by the unit tests and the acceptance run.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "nlsreg/prox.hpp"
#include "test_support.hpp"

namespace nlsreg::testing {

struct OracleReport {
  int instances = 0;
  int failures = 0;
  double worst_gap = 0.0;
  std::string first_failure;

  bool ok() const { return failures == 0; }

  void record(double gap, double tol, const std::string& what) {
    ++instances;
    worst_gap = std::max(worst_gap, gap);
    if (!(gap <= tol)) {
      if (failures == 0) first_failure = what;
      ++failures;
    }
  }
};

inline constexpr double kObjectiveGapTol = 1e-6;

/// 1-D grid oracle with spacing about 1e-3 before refinement.
inline GridResult grid_minimize_1d(const std::function<double(double)>& f, double lo, double hi) {
  const int points = std::max(401, static_cast<int>(std::ceil((hi - lo) / 1e-3)) + 1);
  return grid_minimize([&](const Vector& v) { return f(v(0)); }, Vector::Constant(1, lo),
                       Vector::Constant(1, hi), points);
}

inline double l2_prox_objective(const Vector& v, const Vector& qbar, double nu, double lambda) {
  return 0.5 / nu * (v - qbar).squaredNorm() + lambda * v.norm();
}

inline std::string describe(const char* op, int trial, double ours, double oracle) {
  std::ostringstream os;
  os.precision(17);
  os << op << " trial " << trial << ": value " << ours << " vs grid " << oracle;
  return os.str();
}

/// Random instance of the l2 prox under an l-infinity ball. One in four
/// centers sit on the boundary, one in four outside the ball.
inline TRProxQuery random_tr_query(Gen& gen, Index d) {
  TRProxQuery q;
  q.nu = gen.uniform(0.1, 2.0);
  q.lambda = gen.uniform(0.05, 2.0);
  q.radius = gen.uniform(0.1, 2.0);
  q.qbar = 2.0 * gen.normal_vector(d);
  q.center = gen.uniform_vector(d, -0.9 * q.radius, 0.9 * q.radius);
  const int kind = gen.integer(0, 3);
  const Index k = gen.integer(0, static_cast<int>(d) - 1);
  if (kind == 2) {
    q.center(k) = gen.coin() ? q.radius : -q.radius;
  } else if (kind == 3) {
    q.center(k) = (gen.coin() ? 1.0 : -1.0) * q.radius * gen.uniform(1.05, 3.0);
  }
  return q;
}

/// Grid minimum of the l2 prox objective over the trust-region box.
inline GridResult tr_grid_oracle(const TRProxQuery& q) {
  const Vector lo = (q.center.array() - q.radius).matrix();
  const Vector hi = (q.center.array() + q.radius).matrix();
  auto f = [&](const Vector& v) { return l2_prox_objective(v, q.qbar, q.nu, q.lambda); };
  if (q.qbar.size() == 1) {
    return grid_minimize_1d([&](double v) { return f(Vector::Constant(1, v)); }, lo(0), hi(0));
  }
  return grid_minimize(f, lo, hi);
}

inline OracleReport check_prox_l1_box(std::uint64_t seed, int count) {
  Gen gen(seed);
  OracleReport report;
  for (int trial = 0; trial < count; ++trial) {
    const double q = 3.0 * gen.normal();
    const double nl = gen.uniform(0.0, 2.0);
    ShiftContext ctx{Vector::Constant(1, gen.normal()), std::nullopt};
    double lo = -std::abs(q) - 1.0, hi = std::abs(q) + 1.0;
    if (gen.coin()) {
      const double c = gen.uniform(-2.0, 2.0), r = gen.uniform(0.05, 1.5);
      ctx.region = TrustRegion{Vector::Constant(1, c), r};
      lo = c - r;
      hi = c + r;
    }
    auto f = [&](double v) { return 0.5 * (v - q) * (v - q) + nl * std::abs(v); };
    const double v = prox_l1_box(Vector::Constant(1, q), nl, ctx)(0) + ctx.base(0);
    const GridResult oracle = grid_minimize_1d(f, lo, hi);
    const bool feasible = v >= lo - 1e-12 && v <= hi + 1e-12;
    report.record(feasible ? f(v) - oracle.value : kInf, kObjectiveGapTol,
                  describe("prox_l1_box", trial, f(v), oracle.value));
  }
  return report;
}

inline OracleReport check_prox_lhalf_box(std::uint64_t seed, int count) {
  Gen gen(seed);
  OracleReport report;
  for (int trial = 0; trial < count; ++trial) {
    const double q = 3.0 * gen.normal();
    const double nl = gen.uniform(0.0, 2.0);
    ShiftContext ctx{Vector::Constant(1, gen.normal()), std::nullopt};
    double lo = -std::abs(q) - 1.0, hi = std::abs(q) + 1.0;
    if (gen.coin()) {
      const double c = gen.uniform(-2.0, 2.0), r = gen.uniform(0.05, 1.5);
      ctx.region = TrustRegion{Vector::Constant(1, c), r};
      lo = c - r;
      hi = c + r;
    }
    auto f = [&](double v) { return 0.5 * (v - q) * (v - q) + nl * std::sqrt(std::abs(v)); };
    const double v = prox_lhalf_box(Vector::Constant(1, q), nl, ctx)(0) + ctx.base(0);
    GridResult oracle = grid_minimize_1d(f, lo, hi);
    // The kink at zero is a candidate the grid can straddle.
    if (lo <= 0.0 && hi >= 0.0) oracle.value = std::min(oracle.value, f(0.0));
    const bool feasible = v >= lo - 1e-12 && v <= hi + 1e-12;
    report.record(feasible ? f(v) - oracle.value : kInf, kObjectiveGapTol,
                  describe("prox_lhalf_box", trial, f(v), oracle.value));
  }
  return report;
}

inline OracleReport check_prox_l2(std::uint64_t seed, int count) {
  Gen gen(seed);
  OracleReport report;
  for (int trial = 0; trial < count; ++trial) {
    const Index d = gen.integer(1, 2);
    const Vector y = 2.0 * gen.normal_vector(d);
    const double nl = gen.uniform(0.0, 3.0);
    auto f = [&](const Vector& v) { return l2_prox_objective(v, y, 1.0, nl); };
    const Vector v = prox_l2(y, nl);
    const double bound = y.norm() + 1.0;
    const GridResult oracle =
        d == 1 ? grid_minimize_1d([&](double t) { return f(Vector::Constant(1, t)); }, -bound, bound)
               : grid_minimize(f, Vector::Constant(d, -bound), Vector::Constant(d, bound));
    report.record(f(v) - oracle.value, kObjectiveGapTol,
                  describe("prox_l2", trial, f(v), oracle.value));
  }
  return report;
}

inline OracleReport check_tr_prox_l2(std::uint64_t seed, int count, Index d) {
  Gen gen(seed);
  OracleReport report;
  for (int trial = 0; trial < count; ++trial) {
    const TRProxQuery q = random_tr_query(gen, d);
    const Vector v = tr_prox_l2(q).v;
    const double ours = l2_prox_objective(v, q.qbar, q.nu, q.lambda);
    const GridResult oracle = tr_grid_oracle(q);
    const bool feasible = (v - q.center).lpNorm<Eigen::Infinity>() <= q.radius + 1e-12;
    report.record(feasible ? ours - oracle.value : kInf, kObjectiveGapTol,
                  describe("tr_prox_l2", trial, ours, oracle.value));
  }
  return report;
}

/// Group lasso over two or three groups of size one or two, with or without
/// a trust region. The objective is separable across groups, so the oracle
/// sums per-group grid minima.
inline OracleReport check_tr_prox_group_lasso(std::uint64_t seed, int count) {
  Gen gen(seed);
  OracleReport report;
  for (int trial = 0; trial < count; ++trial) {
    GroupPartition groups;
    Index n = 0;
    const int group_count = gen.integer(2, 3);
    for (int g = 0; g < group_count; ++g) {
      const Index size = gen.integer(1, 2);
      std::vector<Index> group;
      for (Index k = 0; k < size; ++k) group.push_back(n + k);
      groups.push_back(group);
      n += size;
    }
    const double nu = gen.uniform(0.1, 2.0), lambda = gen.uniform(0.05, 2.0);
    const Vector base = gen.normal_vector(n);
    const Vector qbar = base + 2.0 * gen.normal_vector(n);
    ShiftContext ctx{base, std::nullopt};
    const bool boxed = gen.coin();
    if (boxed) ctx.region = TrustRegion{gen.uniform_vector(n, -1.0, 1.0), gen.uniform(0.1, 1.5)};
    const Vector v = tr_prox_group_lasso(qbar, nu, lambda, groups, ctx) + base;

    double ours = 0.0, oracle = 0.0;
    bool feasible = true;
    for (const auto& group : groups) {
      TRProxQuery q;
      const Index size = static_cast<Index>(group.size());
      q.qbar.resize(size);
      q.center = Vector::Zero(size);
      Vector slice(size);
      for (Index k = 0; k < size; ++k) {
        const Index i = group[static_cast<std::size_t>(k)];
        q.qbar(k) = qbar(i);
        slice(k) = v(i);
        if (boxed) q.center(k) = ctx.region->center(i);
      }
      q.nu = nu;
      q.lambda = lambda;
      q.radius = boxed ? ctx.region->radius : q.qbar.norm() + 1.0;
      if (boxed && (slice - q.center).lpNorm<Eigen::Infinity>() > q.radius + 1e-12) feasible = false;
      ours += l2_prox_objective(slice, q.qbar, nu, lambda);
      oracle += tr_grid_oracle(q).value;
    }
    report.record(feasible ? ours - oracle : kInf, kObjectiveGapTol,
                  describe("tr_prox_group_lasso", trial, ours, oracle));
  }
  return report;
}

/// Independent test for v = 0 being the minimizer: zero must be feasible and
/// the distance from qbar to nu times the normal cone of the box at zero must
/// not exceed nu lambda.
inline bool zero_is_optimal(const TRProxQuery& q) {
  double sq = 0.0;
  for (Index i = 0; i < q.qbar.size(); ++i) {
    const double lower = q.center(i) - q.radius, upper = q.center(i) + q.radius;
    if (lower > 0.0 || upper < 0.0) return false;
    double r = q.qbar(i);
    if (upper == 0.0) r = std::min(r, 0.0);       // normal cone [0, inf)
    else if (lower == 0.0) r = std::max(r, 0.0);  // normal cone (-inf, 0]
    sq += r * r;
  }
  return std::sqrt(sq) <= q.nu * q.lambda;
}

/// Case A (v = 0) versus Case B classification against the normal-cone test,
/// with the grid confirming that zero is not beaten when Case A is claimed.
inline OracleReport check_zero_classification(std::uint64_t seed, int count) {
  Gen gen(seed);
  OracleReport report;
  for (int trial = 0; trial < count; ++trial) {
    TRProxQuery q = random_tr_query(gen, gen.integer(1, 2));
    // Shrink some arguments into the dead zone so both outcomes are common.
    if (gen.coin()) q.qbar *= gen.uniform(0.0, 1.2) * q.nu * q.lambda / std::max(q.qbar.norm(), 1e-12);
    const TRProxResult r = tr_prox_l2(q);
    const bool expected = zero_is_optimal(q);
    bool agree = r.zero_solution == expected;
    if (agree && expected) {
      const double at_zero = l2_prox_objective(Vector::Zero(q.qbar.size()), q.qbar, q.nu, q.lambda);
      agree = at_zero <= tr_grid_oracle(q).value + kObjectiveGapTol;
    }
    std::ostringstream os;
    os << "classification trial " << trial << ": solver says zero=" << r.zero_solution
       << ", normal-cone test says " << expected;
    report.record(agree ? 0.0 : 1.0, 0.0, os.str());
  }
  return report;
}

struct CaseInstance {
  TRProxCase expected;
  TRProxQuery query;
};

inline TRProxQuery make_query(Vector qbar, double nu, double lambda, Vector center, double radius) {
  TRProxQuery q;
  q.qbar = std::move(qbar);
  q.nu = nu;
  q.lambda = lambda;
  q.center = std::move(center);
  q.radius = radius;
  return q;
}

/// One hand-built instance per branch of the case analysis.
inline std::vector<CaseInstance> constructed_cases() {
  auto v2 = [](double a, double b) { return Vector{{a, b}}; };
  return {
      {TRProxCase::CenterOutside, make_query(v2(1, 1), 1, 1, v2(2, 0), 0.5)},
      {TRProxCase::InteriorRoot, make_query(v2(3, 4), 1, 1, v2(0, 0), 10)},
      {TRProxCase::InteriorDeadZone, make_query(v2(0.3, 0.4), 1, 1, v2(0.1, 0), 1)},
      {TRProxCase::BoundaryPinned, make_query(v2(-2, 0), 1, 0.5, v2(1, 0), 1)},
      {TRProxCase::BoundarySearch, make_query(v2(3, 4), 1, 1, v2(1, 0), 1)},
      {TRProxCase::BoundarySearch, make_query(v2(-3, 4), 1, 1, v2(1, 0), 1)},
      {TRProxCase::BoundaryDeadZone, make_query(v2(0.3, 0.4), 1, 1, v2(1, 0), 1)},
  };
}

/// Every constructed instance takes its intended branch and returns the grid
/// minimizer (objective gap 1e-6, argument within 1e-4).
inline OracleReport check_constructed_cases() {
  OracleReport report;
  const auto cases = constructed_cases();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const CaseInstance& c = cases[i];
    const TRProxResult r = tr_prox_l2(c.query);
    const GridResult oracle = tr_grid_oracle(c.query);
    const double ours = l2_prox_objective(r.v, c.query.qbar, c.query.nu, c.query.lambda);
    const bool ok = r.which == c.expected && ours - oracle.value <= kObjectiveGapTol &&
                    (r.v - oracle.argmin).norm() <= 1e-4;
    std::ostringstream os;
    os << "case instance " << i << " (" << to_string(c.expected) << "): took "
       << to_string(r.which) << ", value " << ours << " vs grid " << oracle.value;
    report.record(ok ? 0.0 : 1.0, 0.0, os.str());
  }
  return report;
}

}  // namespace nlsreg::testing
