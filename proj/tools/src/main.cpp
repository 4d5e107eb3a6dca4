#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace efsolver;

  CLI::App app{"Solver for exists-forall constraints linear in the existential variables"};
  app.require_subcommand(1);

  cli::SolveFlags solve_flags;
  std::string file;
  const std::map<std::string, Strategy> strategies{{"round-robin", Strategy::RoundRobin},
                                                   {"split-worst", Strategy::SplitWorst},
                                                   {"split-all", Strategy::SplitAll}};
  auto* solve = app.add_subcommand("solve", "Solve one problem file");
  solve->add_option("FILE", file, "Problem file")->required();
  solve->add_option("--strategy", solve_flags.strategy, "Splitting strategy")
      ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case));
  solve->add_option("--epsilon", solve_flags.epsilon, "Coefficient score offset")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--kappa", solve_flags.kappa, "Aging weight of the variable choice")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--max-splits", solve_flags.max_splits, "Split limit");
  solve->add_option("--time-budget", solve_flags.time_budget, "Seconds, 0 for no limit")
      ->check(CLI::NonNegativeNumber);
  solve->add_flag("--verify", solve_flags.verify, "Check the solution independently");
  solve->add_flag("--json", solve_flags.json, "Print a JSON report");

  cli::BenchFlags bench_flags;
  std::string dir;
  auto* bench = app.add_subcommand("bench", "Run examples A-D under all strategies");
  bench->add_flag("--json", bench_flags.json, "Print one JSON report per run");
  bench->add_option("--time-budget", bench_flags.time_budget, "Seconds per run")
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--max-splits", bench_flags.max_splits, "Split limit per run");
  bench->add_option("--dir", dir, "Directory holding A.efp ... D.efp")
      ->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInputError;
  }

  if (*solve) return cli::cmd_solve(file, solve_flags, std::cout, std::cerr);
  bench_flags.dir = dir;
  return cli::cmd_bench(bench_flags, std::cout, std::cerr);
}
