#pragma once

// Oracles and generators shared by the unit, property and acceptance tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "nlsreg/problem.hpp"

namespace nlsreg::testing {

/// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  Vector normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }
  Vector uniform_vector(Index n, double lo, double hi) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }
  Matrix normal_matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

 private:
  std::mt19937_64 rng_;
};

struct GridResult {
  Vector argmin;
  double value = std::numeric_limits<double>::infinity();
};

/// Brute-force minimization over the box [lo, hi] (dimension 1 or 2): a
/// uniform grid with `points` nodes per axis, then repeated zooming around the
/// best few nodes until the spacing drops below `final_step`.
inline GridResult grid_minimize(const std::function<double(const Vector&)>& f, const Vector& lo,
                                const Vector& hi, int points = 401, double final_step = 1e-7) {
  const Index d = lo.size();
  struct Node {
    double value;
    Vector x;
  };
  auto scan = [&](const Vector& a, const Vector& b, int n, std::vector<Node>& best, std::size_t keep) {
    Vector x(d);
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    while (true) {
      for (Index k = 0; k < d; ++k) {
        const double t = n > 1 ? static_cast<double>(idx[static_cast<std::size_t>(k)]) / (n - 1) : 0.0;
        x(k) = std::clamp(a(k) + t * (b(k) - a(k)), lo(k), hi(k));
      }
      const double v = f(x);
      if (best.size() < keep || v < best.back().value) {
        best.push_back({v, x});
        std::sort(best.begin(), best.end(), [](const Node& p, const Node& q) { return p.value < q.value; });
        if (best.size() > keep) best.pop_back();
      }
      Index k = 0;
      while (k < d && ++idx[static_cast<std::size_t>(k)] == n) idx[static_cast<std::size_t>(k++)] = 0;
      if (k == d) break;
    }
  };

  std::vector<Node> seeds;
  scan(lo, hi, points, seeds, 4);
  Vector step = (hi - lo) / std::max(points - 1, 1);
  GridResult out;
  for (const Node& s : seeds) {
    Vector center = s.x;
    Vector h = step;
    double value = s.value;
    while (h.maxCoeff() > final_step) {
      std::vector<Node> local{{value, center}};
      scan(center - 2.0 * h, center + 2.0 * h, 41, local, 1);
      center = local.front().x;
      value = local.front().value;
      h /= 10.0;
    }
    if (value < out.value) out = {center, value};
  }
  return out;
}

/// Forward-difference Jacobian (F(x + eps e_j) - F(x)) / eps.
inline Matrix forward_difference_jacobian(LeastSquaresProblem& p, const Vector& x, double eps) {
  const Vector f0 = p.residual(x);
  Matrix J(f0.size(), x.size());
  for (Index j = 0; j < x.size(); ++j) {
    Vector xp = x;
    xp(j) += eps;
    J.col(j) = (p.residual(xp) - f0) / eps;
  }
  return J;
}

/// Central-difference Jacobian (F(x + eps e_j) - F(x - eps e_j)) / (2 eps).
inline Matrix central_difference_jacobian(LeastSquaresProblem& p, const Vector& x, double eps) {
  Matrix J(p.num_residuals(), x.size());
  for (Index j = 0; j < x.size(); ++j) {
    Vector xp = x, xm = x;
    xp(j) += eps;
    xm(j) -= eps;
    J.col(j) = (p.residual(xp) - p.residual(xm)) / (2.0 * eps);
  }
  return J;
}

/// Dense J(x) assembled column by column from Jacobian-vector products.
inline Matrix dense_jacobian(LeastSquaresProblem& p, const Vector& x) {
  Matrix J(p.num_residuals(), p.num_variables());
  for (Index j = 0; j < J.cols(); ++j) J.col(j) = p.jprod(x, Vector::Unit(J.cols(), j));
  return J;
}

/// max over trials of |<Jv, w> - <v, J^T w>| / (1 + |<Jv, w>|).
inline double adjoint_defect(LeastSquaresProblem& p, const Vector& x, Gen& gen, int trials = 20) {
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Vector v = gen.normal_vector(p.num_variables());
    const Vector w = gen.normal_vector(p.num_residuals());
    const double lhs = p.jprod(x, v).dot(w);
    const double rhs = v.dot(p.jtprod(x, w));
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  return worst;
}

}  // namespace nlsreg::testing
