#include "efsolver/relaxation.hpp"

#include <stdexcept>

#include "efsolver/errors.hpp"
#include "efsolver/simplex.hpp"

namespace efsolver {

void IntervalLinearSystem::add_row(BranchId branch, std::vector<Interval> p,
                                   Interval q) {
  if (p.size() != num_vars) {
    throw std::invalid_argument("interval row has the wrong number of entries");
  }
  rows.push_back(Row{branch, std::move(p), q});
}

FeasibilityLP rohn_transform(const IntervalLinearSystem& sys,
                             const Eigen::MatrixXd& c,
                             const Eigen::VectorXd& d) {
  const auto n = static_cast<Eigen::Index>(sys.rows.size());
  const auto r = static_cast<Eigen::Index>(sys.num_vars);
  FeasibilityLP lp;
  lp.p_hi.resize(n, r);
  lp.p_lo.resize(n, r);
  lp.b.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = sys.rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < r; ++j) {
      lp.p_hi(i, j) = row.p[static_cast<std::size_t>(j)].hi();
      lp.p_lo(i, j) = row.p[static_cast<std::size_t>(j)].lo();
    }
    // Must hold for every q in [q_lo, q_hi]; the lower endpoint is binding.
    lp.b(i) = row.q.lo();
  }
  if (c.rows() > 0) {
    if (c.cols() != r || d.size() != c.rows()) {
      throw std::invalid_argument("equality system does not match the variables");
    }
    lp.c = c;
    lp.d = d;
  } else {
    lp.c.resize(0, r);
    lp.d.resize(0);
  }
  lp.col_map.reserve(static_cast<std::size_t>(2 * r));
  for (Eigen::Index j = 0; j < r; ++j) {
    lp.col_map.push_back({static_cast<std::size_t>(j), BoundSide::Upper});
  }
  for (Eigen::Index j = 0; j < r; ++j) {
    lp.col_map.push_back({static_cast<std::size_t>(j), BoundSide::Lower});
  }
  return lp;
}

namespace {

// Variables: [x1 (r), x2 (r), rho]. `rho_floor` adds rho >= rho_floor.
LinearProgram residual_program(const FeasibilityLP& lp,
                               std::optional<double> rho_floor) {
  const Eigen::Index n = lp.p_hi.rows();
  const Eigen::Index r = lp.p_hi.cols();
  const Eigen::Index cols = 2 * r + 1;
  const Eigen::Index extra = rho_floor ? 1 : 0;

  LinearProgram prog;
  prog.objective = Eigen::VectorXd::Zero(cols);
  prog.objective(2 * r) = 1.0;
  prog.ineq = Eigen::MatrixXd::Zero(n + extra, cols);
  prog.ineq_rhs = Eigen::VectorXd::Zero(n + extra);
  prog.ineq.block(0, 0, n, r) = lp.p_hi;
  prog.ineq.block(0, r, n, r) = -lp.p_lo;
  prog.ineq.block(0, 2 * r, n, 1).setConstant(-1.0);
  prog.ineq_rhs.head(n) = lp.b;
  if (rho_floor) {
    prog.ineq(n, 2 * r) = -1.0;
    prog.ineq_rhs(n) = -*rho_floor;
  }
  const Eigen::Index n_eq = lp.c.rows();
  prog.eq = Eigen::MatrixXd::Zero(n_eq, cols);
  if (n_eq > 0) {
    prog.eq.block(0, 0, n_eq, r) = lp.c;
    prog.eq.block(0, r, n_eq, r) = -lp.c;
  }
  prog.eq_rhs = lp.d;
  prog.free.assign(static_cast<std::size_t>(cols), false);
  prog.free.back() = true;
  return prog;
}

}  // namespace

LPSolution solve_feasibility(const FeasibilityLP& lp) {
  const Eigen::Index r = lp.p_hi.cols();
  SimplexResult res = simplex_solve(residual_program(lp, std::nullopt));
  if (res.status == SimplexStatus::Infeasible) {
    throw EqualitiesInfeasible("the linear equalities have no solution");
  }
  LPSolution sol;
  sol.pivots = res.pivots;
  if (res.status == SimplexStatus::Unbounded) {
    const SimplexResult floor = simplex_solve(residual_program(lp, -1.0));
    if (floor.status != SimplexStatus::Optimal) {
      throw EqualitiesInfeasible("the linear equalities have no solution");
    }
    res = floor;
    sol.status = LPStatus::Unbounded;
    sol.pivots += floor.pivots;
  }
  sol.x1 = res.w.head(r);
  sol.x2 = res.w.segment(r, r);
  if (sol.status == LPStatus::Unbounded) {
    // Any point with residuals <= -1 will do; the complementary split of
    // x1 - x2 only lowers them.
    const Eigen::VectorXd x = sol.x();
    sol.x1 = x.cwiseMax(0.0);
    sol.x2 = (-x).cwiseMax(0.0);
  }
  sol.rho = sol.status == LPStatus::Unbounded ? kUnboundedRho : res.w(2 * r);
  return sol;
}

Eigen::VectorXd residual_vector(const FeasibilityLP& lp, const LPSolution& sol) {
  return lp.p_hi * sol.x1 - lp.p_lo * sol.x2 - lp.b;
}

}  // namespace efsolver
