#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "efsolver/heuristics.hpp"
#include "efsolver/interval.hpp"
#include "efsolver/problem.hpp"
#include "efsolver/relaxation.hpp"
#include "efsolver/verifier.hpp"

namespace efsolver {

// Snapshot passed to SolveConfig::on_iteration after each LP solve that did
// not end the search.
struct IterationInfo {
  std::size_t iteration = 0;
  std::size_t splits = 0;
  std::size_t live_branches = 0;
  double rho = 0.0;
  std::vector<SplitTarget> targets;  // variables filled in
};

struct SolveConfig {
  HeuristicConfig heuristic;
  std::size_t max_splits = 5000;  // limit on split steps
  std::size_t max_live_boxes = 100000;  // 0 disables the limit
  double time_budget = 60.0;  // seconds; <= 0 disables the limit
  bool verify = false;
  int verify_depth = 25;
  std::function<void(const IterationInfo&)> on_iteration;
};

// Residual of one branch at the returned x.
struct BranchCertificate {
  BranchId branch = 0;
  std::size_t source = 0;  // index into Problem::branches
  Box box;
  double residual = 0.0;
};

struct Solution {
  Eigen::VectorXd x;
  double rho = 0.0;
  std::vector<BranchCertificate> certificate;
};

struct Infeasible {
  // Set when a sub-box proved its branch false; empty when the equalities
  // alone are unsatisfiable.
  std::optional<std::size_t> source;
  std::optional<Box> box;
  std::string reason;
};

struct BudgetExhausted {
  std::string reason;
};

struct SolveStats {
  // Split steps. A split-all step bisects every selected box at once; the
  // other strategies bisect one box per step.
  std::size_t splits = 0;
  std::size_t boxes_split = 0;
  std::size_t lp_solves = 0;
  std::size_t iterations = 0;
  double wall_time_ms = 0.0;
};

struct SolveOutcome {
  std::variant<Solution, Infeasible, BudgetExhausted> result;
  SolveStats stats;
  std::optional<VerifyResult> verification;  // only with SolveConfig::verify

  const Solution* solution() const { return std::get_if<Solution>(&result); }
  bool infeasible() const { return std::holds_alternative<Infeasible>(result); }
  bool exhausted() const { return std::holds_alternative<BudgetExhausted>(result); }
};

// Throws std::invalid_argument if the problem does not validate or the
// configuration is malformed.
SolveOutcome solve(const Problem& p, const SolveConfig& cfg = {});

const char* to_string(Strategy s);
// Accepts "round-robin", "split-worst", "split-all".
std::optional<Strategy> parse_strategy(const std::string& name);

}  // namespace efsolver
