#pragma once

#include <vector>

#include <Eigen/Core>

namespace efsolver {

// min c'w  s.t.  G w <= h,  E w = f,  w_j >= 0 unless free[j].
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd ineq;
  Eigen::VectorXd ineq_rhs;
  Eigen::MatrixXd eq;
  Eigen::VectorXd eq_rhs;
  std::vector<bool> free;  // empty means all variables are non-negative
};

enum class SimplexStatus { Optimal, Infeasible, Unbounded };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::Infeasible;
  Eigen::VectorXd w;       // basic solution (Optimal only)
  double objective = 0.0;  // c'w (Optimal only)
  int pivots = 0;
};

struct SimplexOptions {
  double tolerance = 1e-9;
  int max_pivots = 1000000;
};

// Two-phase primal simplex on a condensed (Tucker) tableau with Bland's
// anti-cycling rule. Free variables are split into differences of
// non-negative ones and equalities into pairs of inequalities, so each pivot
// costs O(rows * columns) with only as many columns as variables. Returns a
// vertex of the feasible region. Throws std::runtime_error when max_pivots
// is exceeded.
SimplexResult simplex_solve(const LinearProgram& lp,
                            const SimplexOptions& options = {});

}  // namespace efsolver
