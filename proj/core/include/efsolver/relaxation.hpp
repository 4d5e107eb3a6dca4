#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "efsolver/interval.hpp"

namespace efsolver {

using BranchId = std::uint64_t;

// P x <= q with interval entries, one row per branch that reduced to a
// LinearRow. Must hold for every choice of P and q within the intervals.
struct IntervalLinearSystem {
  struct Row {
    BranchId branch = 0;
    std::vector<Interval> p;
    Interval q;
  };

  std::size_t num_vars = 0;
  std::vector<Row> rows;

  // Throws std::invalid_argument if the row width differs from num_vars.
  void add_row(BranchId branch, std::vector<Interval> p, Interval q);
};

enum class BoundSide { Upper, Lower };

// LP column k maps to interval column `source` and the bound it carries:
// columns 0..r-1 are x1 (upper endpoints), r..2r-1 are x2 (lower endpoints).
struct ColumnSource {
  std::size_t source = 0;
  BoundSide side = BoundSide::Upper;
};

// The real system  P_hi x1 - P_lo x2 <= b,  C (x1 - x2) = d,  x1, x2 >= 0
// obtained by writing x = x1 - x2.
struct FeasibilityLP {
  Eigen::MatrixXd p_hi;  // n x r
  Eigen::MatrixXd p_lo;  // n x r
  Eigen::VectorXd b;     // n, lower endpoints of q
  Eigen::MatrixXd c;     // n_eq x r
  Eigen::VectorXd d;     // n_eq
  std::vector<ColumnSource> col_map;  // 2r entries

  std::size_t num_rows() const { return static_cast<std::size_t>(b.size()); }
  std::size_t num_vars() const { return static_cast<std::size_t>(p_hi.cols()); }
};

FeasibilityLP rohn_transform(const IntervalLinearSystem& sys,
                             const Eigen::MatrixXd& c = {},
                             const Eigen::VectorXd& d = {});

enum class LPStatus { Optimal, Unbounded };

// Sentinel residual reported when the residual is unbounded below.
inline constexpr double kUnboundedRho = -1e30;

struct LPSolution {
  Eigen::VectorXd x1;
  Eigen::VectorXd x2;
  double rho = 0.0;
  LPStatus status = LPStatus::Optimal;
  int pivots = 0;

  Eigen::VectorXd x() const { return x1 - x2; }
};

// min rho  s.t.  P_hi x1 - P_lo x2 - b <= rho 1,  C (x1 - x2) = d,
//               x1, x2 >= 0.
// When rho is unbounded below (e.g. no inequality rows) the status is
// Unbounded, rho is kUnboundedRho, and x1/x2 hold a point with every
// residual <= -1 that satisfies the equalities.
// Throws EqualitiesInfeasible when C x = d has no solution.
LPSolution solve_feasibility(const FeasibilityLP& lp);

// d_i = (P_hi x1 - P_lo x2 - b)_i.
Eigen::VectorXd residual_vector(const FeasibilityLP& lp, const LPSolution& sol);

}  // namespace efsolver
