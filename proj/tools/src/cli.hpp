#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "efsolver/problem.hpp"
#include "efsolver/solver.hpp"

namespace efsolver::cli {

enum ExitCode { kSolution = 0, kInfeasible = 1, kBudget = 2, kInputError = 3 };

struct RunReport {
  std::string instance;
  std::string outcome_kind;  // solution | infeasible | budget_exhausted
  std::vector<double> x_values;
  std::size_t splits = 0;  // split steps
  std::size_t boxes_split = 0;
  std::size_t lp_solves = 0;
  double wall_time_ms = 0.0;
  std::string strategy;
  double epsilon = 0.0;
  bool verified = false;
  std::string detail;
};

void to_json(nlohmann::json& j, const RunReport& r);
void from_json(const nlohmann::json& j, RunReport& r);

struct SolveFlags {
  Strategy strategy = Strategy::SplitAll;
  double epsilon = 0.001;
  double kappa = 0.1;
  std::size_t max_splits = 5000;
  double time_budget = 60.0;
  bool verify = false;
  bool json = false;
};

SolveConfig make_config(const SolveFlags& flags);
RunReport run(const Problem& p, const SolveFlags& flags, const std::string& instance);
int exit_code(const RunReport& r);

// Parses, solves, prints, returns the process exit code.
int cmd_solve(const std::filesystem::path& file, const SolveFlags& flags,
              std::ostream& out, std::ostream& err);

struct BenchFlags {
  bool json = false;
  double time_budget = 60.0;
  std::size_t max_splits = 5000;
  std::filesystem::path dir;  // empty: the bundled problem directory
};

std::filesystem::path default_problem_dir();

// Runs A-D under every strategy. Returns 0 unless a file is missing or
// malformed.
int cmd_bench(const BenchFlags& flags, std::ostream& out, std::ostream& err);

}  // namespace efsolver::cli
