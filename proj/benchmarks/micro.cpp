#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "efsolver/parser.hpp"
#include "efsolver/relaxation.hpp"
#include "efsolver/solver.hpp"

using namespace efsolver;

namespace {

Problem load(const std::string& name) {
  return parse_problem_file(std::string(EFSOLVER_PROBLEM_DIR) + "/" + name + ".efp");
}

void BM_EvalCoefficients(benchmark::State& state) {
  const Problem p = load("D");
  for (auto _ : state) {
    for (const auto& b : p.branches) {
      for (const auto& [x, t] : find_linear(b.formula)->coeffs) {
        benchmark::DoNotOptimize(eval_on_box(t, b.box));
      }
    }
  }
}
BENCHMARK(BM_EvalCoefficients);

void BM_SolveFeasibility(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  IntervalLinearSystem sys;
  sys.num_vars = 5;
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<Interval> p;
    for (std::size_t j = 0; j < sys.num_vars; ++j) {
      const double a = u(rng);
      p.emplace_back(a, a + 0.1);
    }
    sys.add_row(i + 1, std::move(p), Interval(u(rng)));
  }
  const FeasibilityLP lp = rohn_transform(sys);
  for (auto _ : state) benchmark::DoNotOptimize(solve_feasibility(lp));
}
BENCHMARK(BM_SolveFeasibility)->Arg(8)->Arg(64)->Arg(256);

void BM_Solve(benchmark::State& state) {
  const Problem p = load(state.range(0) == 0 ? "A" : "D");
  SolveConfig cfg;
  cfg.heuristic.strategy = static_cast<Strategy>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, cfg));
}
BENCHMARK(BM_Solve)
    ->ArgsProduct({{0, 1}, {static_cast<long>(Strategy::SplitWorst),
                            static_cast<long>(Strategy::SplitAll)}})
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
