#include "nlsreg/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlsreg {
namespace {

void require_size(const Vector& v, Index expected, const char* what) {
  if (v.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(expected) + ", got " +
                                std::to_string(v.size()));
  }
}

}  // namespace

LeastSquaresProblem::LeastSquaresProblem(Index num_variables, Index num_residuals)
    : n_(num_variables), m_(num_residuals) {
  if (n_ <= 0 || m_ <= 0) {
    throw std::invalid_argument("LeastSquaresProblem: dimensions must be positive");
  }
}

Vector LeastSquaresProblem::residual(const Vector& x) {
  require_size(x, n_, "residual(x)");
  ++counters_.residual;
  Vector out(m_);
  eval_residual(x, out);
  require_size(out, m_, "residual output");
  if (!out.allFinite()) {
    throw EvaluationError("residual evaluation produced non-finite values");
  }
  return out;
}

Vector LeastSquaresProblem::jprod(const Vector& x, const Vector& v) {
  require_size(x, n_, "jprod(x)");
  require_size(v, n_, "jprod(v)");
  ++counters_.jprod;
  Vector out(m_);
  eval_jprod(x, v, out);
  require_size(out, m_, "jprod output");
  return out;
}

Vector LeastSquaresProblem::jtprod(const Vector& x, const Vector& w) {
  require_size(x, n_, "jtprod(x)");
  require_size(w, m_, "jtprod(w)");
  ++counters_.jtprod;
  Vector out(n_);
  eval_jtprod(x, w, out);
  require_size(out, n_, "jtprod output");
  return out;
}

LinearProblem::LinearProblem(Matrix A, Vector b)
    : LeastSquaresProblem(A.cols(), A.rows()), A_(std::move(A)), b_(std::move(b)) {
  if (b_.size() != A_.rows()) {
    throw std::invalid_argument("LinearProblem: rhs length must equal row count");
  }
}

void LinearProblem::eval_residual(const Vector& x, Vector& out) {
  out.noalias() = A_ * x;
  out -= b_;
}

void LinearProblem::eval_jprod(const Vector&, const Vector& v, Vector& out) {
  out.noalias() = A_ * v;
}

void LinearProblem::eval_jtprod(const Vector&, const Vector& w, Vector& out) {
  out.noalias() = A_.transpose() * w;
}

ObjectiveValue objective(LeastSquaresProblem& problem, const Vector& x) {
  ObjectiveValue out;
  out.residual = problem.residual(x);
  out.f = 0.5 * out.residual.squaredNorm();
  return out;
}

double spectral_norm(LeastSquaresProblem& problem, const Vector& x, double tol,
                     int max_iter) {
  const Index n = problem.num_variables();
  Vector v = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector Jv = problem.jprod(x, v);
    const double next = Jv.norm();
    if (next == 0.0) return 0.0;
    Vector u = problem.jtprod(x, Jv);
    const double unorm = u.norm();
    if (unorm == 0.0) return next;
    v = u / unorm;
    const bool converged = it > 0 && std::abs(next - estimate) <= tol * next;
    estimate = next;
    if (converged) break;
  }
  return estimate;
}

}  // namespace nlsreg
