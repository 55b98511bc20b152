#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "nlsreg/types.hpp"

namespace nlsreg {

/// A nonlinear least-squares residual F: R^n -> R^m with matrix-free
/// Jacobian products.
///
/// The public entry points validate shapes and count calls; subclasses
/// implement the protected evaluators. Counters are per instance, so two
/// solves on distinct instances never share state.
class LeastSquaresProblem {
 public:
  struct Counters {
    std::int64_t residual = 0;
    std::int64_t jprod = 0;
    std::int64_t jtprod = 0;
  };

  LeastSquaresProblem(Index num_variables, Index num_residuals);
  virtual ~LeastSquaresProblem() = default;

  LeastSquaresProblem(const LeastSquaresProblem&) = delete;
  LeastSquaresProblem& operator=(const LeastSquaresProblem&) = delete;

  Index num_variables() const { return n_; }
  Index num_residuals() const { return m_; }

  /// F(x). Throws EvaluationError if any entry is non-finite.
  Vector residual(const Vector& x);
  /// J(x) v.
  Vector jprod(const Vector& x, const Vector& v);
  /// J(x)^T w.
  Vector jtprod(const Vector& x, const Vector& w);

  const Counters& counters() const { return counters_; }
  void reset_counters() { counters_ = {}; }

 protected:
  virtual void eval_residual(const Vector& x, Vector& out) = 0;
  virtual void eval_jprod(const Vector& x, const Vector& v, Vector& out) = 0;
  virtual void eval_jtprod(const Vector& x, const Vector& w, Vector& out) = 0;

 private:
  Index n_;
  Index m_;
  Counters counters_;
};

/// Problem assembled from callables. Handy for tests and small models.
class FunctionProblem final : public LeastSquaresProblem {
 public:
  using ResidualFn = std::function<Vector(const Vector&)>;
  using ProductFn = std::function<Vector(const Vector&, const Vector&)>;

  FunctionProblem(Index n, Index m, ResidualFn residual, ProductFn jprod,
                  ProductFn jtprod)
      : LeastSquaresProblem(n, m),
        residual_(std::move(residual)),
        jprod_(std::move(jprod)),
        jtprod_(std::move(jtprod)) {}

 protected:
  void eval_residual(const Vector& x, Vector& out) override { out = residual_(x); }
  void eval_jprod(const Vector& x, const Vector& v, Vector& out) override {
    out = jprod_(x, v);
  }
  void eval_jtprod(const Vector& x, const Vector& w, Vector& out) override {
    out = jtprod_(x, w);
  }

 private:
  ResidualFn residual_;
  ProductFn jprod_;
  ProductFn jtprod_;
};

/// F(x) = A x - b with a dense A.
class LinearProblem final : public LeastSquaresProblem {
 public:
  LinearProblem(Matrix A, Vector b);

  const Matrix& matrix() const { return A_; }
  const Vector& rhs() const { return b_; }

 protected:
  void eval_residual(const Vector& x, Vector& out) override;
  void eval_jprod(const Vector& x, const Vector& v, Vector& out) override;
  void eval_jtprod(const Vector& x, const Vector& w, Vector& out) override;

 private:
  Matrix A_;
  Vector b_;
};

struct ObjectiveValue {
  double f = 0.0;
  Vector residual;
};

/// f(x) = 0.5 ||F(x)||^2 together with F(x). One residual evaluation.
ObjectiveValue objective(LeastSquaresProblem& problem, const Vector& x);

/// Largest singular value of J(x) by power iteration on J^T J, started from
/// the normalized all-ones vector. Stops when the relative change of the
/// estimate drops below `tol` or after `max_iter` iterations. Returns 0 for a
/// zero Jacobian.
double spectral_norm(LeastSquaresProblem& problem, const Vector& x,
                     double tol = 1e-4, int max_iter = 100);

}  // namespace nlsreg
