#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlsreg/options.hpp"
#include "nlsreg/types.hpp"

namespace nlsreg {

enum class SolverStatus { FirstOrder, MaxIterations, Stalled };

const char* to_string(SolverStatus status);

/// One residual evaluation. Rejected trial points are recorded too.
struct HistoryEntry {
  std::int64_t evaluation = 0;
  double f = 0.0;
  double h = 0.0;
  bool accepted = false;
};

struct SolverStats {
  std::string solver;
  SolverStatus status = SolverStatus::MaxIterations;
  Vector x;
  double f = 0.0;
  double h = 0.0;
  double xi = 0.0;
  int iterations = 0;
  int successful = 0;
  /// Residual evaluations.
  std::int64_t residual_evals = 0;
  /// Gradient evaluations for R2, transposed Jacobian products for LM/LMTR.
  std::int64_t gradient_evals = 0;
  std::int64_t jprods = 0;
  std::int64_t prox_calls = 0;
  std::int64_t inner_iterations = 0;
  double elapsed_seconds = 0.0;
  std::vector<HistoryEntry> history;
  std::vector<IterationRecord> trace;

  double objective() const { return f + h; }
};

}  // namespace nlsreg
