#include <benchmark/benchmark.h>

#include "nlsreg/problems/fh.hpp"
#include "nlsreg/problems/group_lasso.hpp"
#include "nlsreg/problems/svm.hpp"
#include "nlsreg/solvers.hpp"

using namespace nlsreg;
using namespace nlsreg::problems;

namespace {

using SolveFn = SolverStats (*)(LeastSquaresProblem&, const Regularizer&, const Vector&,
                                const SolverOptions&);

void BM_GroupLasso(benchmark::State& state, SolveFn solve) {
  const GroupLassoInstance inst = generate_group_lasso(1);
  SolverOptions opts;
  opts.max_outer = 10000;
  std::int64_t evals = 0;
  for (auto _ : state) {
    GroupLassoSetup setup = make_group_lasso(inst);
    evals = solve(*setup.problem, setup.regularizer, setup.x0, opts).residual_evals;
  }
  state.counters["residual_evals"] = static_cast<double>(evals);
}
BENCHMARK_CAPTURE(BM_GroupLasso, lm, &lm_solve)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GroupLasso, lmtr, &lmtr_solve)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_GroupLasso, r2, &r2_minimize)->Unit(benchmark::kMillisecond);

void BM_FitzHughNagumo(benchmark::State& state, SolveFn solve) {
  const FHInstance inst = generate_fh();
  SolverOptions opts;
  opts.atol = 1e-2;
  for (auto _ : state) {
    FHSetup setup = make_fh(inst);
    benchmark::DoNotOptimize(solve(*setup.problem, setup.regularizer, setup.x0, opts));
  }
}
BENCHMARK_CAPTURE(BM_FitzHughNagumo, lm, &lm_solve)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FitzHughNagumo, lmtr, &lmtr_solve)->Unit(benchmark::kMillisecond);

void BM_Svm(benchmark::State& state, SolveFn solve) {
  const SvmInstance inst = generate_svm(1);
  for (auto _ : state) {
    SvmSetup setup = make_svm(inst);
    benchmark::DoNotOptimize(solve(*setup.problem, setup.regularizer, setup.x0, {}));
  }
}
BENCHMARK_CAPTURE(BM_Svm, lm, &lm_solve)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Svm, lmtr, &lmtr_solve)->Unit(benchmark::kMillisecond);

void BM_FHSensitivity(benchmark::State& state) {
  FHGrid grid;
  const Vector x = Vector::Constant(5, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(fh_sensitivity(x, grid));
}
BENCHMARK(BM_FHSensitivity)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
