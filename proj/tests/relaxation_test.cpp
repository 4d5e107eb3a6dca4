#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "efsolver/errors.hpp"
#include "efsolver/relaxation.hpp"
#include "efsolver/simplex.hpp"
#include "support.hpp"

using namespace efsolver;

namespace {

IntervalLinearSystem single_row(Interval p1, Interval p2, Interval q) {
  IntervalLinearSystem sys;
  sys.num_vars = 2;
  sys.add_row(1, {p1, p2}, q);
  return sys;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// min c'w over G w <= h, w >= 0, by trying every choice of n active
// constraints among the rows of G and the bounds w >= 0.
std::optional<double> enumerate_vertices(const Eigen::VectorXd& c, const Eigen::MatrixXd& g,
                                         const Eigen::VectorXd& h) {
  const auto n = c.size();
  const auto m = g.rows();
  Eigen::MatrixXd all(m + n, n);
  Eigen::VectorXd rhs(m + n);
  all << g, -Eigen::MatrixXd::Identity(n, n);
  rhs << h, Eigen::VectorXd::Zero(n);

  std::optional<double> best;
  std::vector<bool> pick(static_cast<std::size_t>(m + n), false);
  std::fill(pick.end() - n, pick.end(), true);
  do {
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < m + n; ++i) {
      if (!pick[static_cast<std::size_t>(i)]) continue;
      a.row(k) = all.row(i);
      b(k++) = rhs(i);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd w = lu.solve(b);
    if (((all * w - rhs).array() > 1e-9).any()) continue;
    const double v = c.dot(w);
    if (!best || v < *best) best = v;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

}  // namespace

TEST(RohnTransform, PaperRow) {
  const auto lp = rohn_transform(single_row(Interval(-1, 3), Interval(-3, 1), Interval(-2)));
  // Coefficients of x1_1, x2_1, x1_2, x2_2 in  p_hi x1 - p_lo x2 <= b.
  EXPECT_EQ(lp.p_hi(0, 0), 3.0);
  EXPECT_EQ(-lp.p_lo(0, 0), 1.0);
  EXPECT_EQ(lp.p_hi(0, 1), 1.0);
  EXPECT_EQ(-lp.p_lo(0, 1), 3.0);
  EXPECT_EQ(lp.b(0), -2.0);
}

TEST(RohnTransform, PointRow) {
  IntervalLinearSystem sys;
  sys.num_vars = 1;
  sys.add_row(1, {Interval(2)}, Interval(5));
  const auto lp = rohn_transform(sys);
  EXPECT_EQ(lp.p_hi(0, 0), 2.0);
  EXPECT_EQ(lp.p_lo(0, 0), 2.0);
  EXPECT_EQ(lp.b(0), 5.0);
}

TEST(RohnTransform, RhsTakesLowerEndpoint) {
  IntervalLinearSystem sys;
  sys.num_vars = 1;
  sys.add_row(1, {Interval(1)}, Interval(-3, 7));
  EXPECT_EQ(rohn_transform(sys).b(0), -3.0);
}

TEST(RohnTransform, ColumnMapIsBijection) {
  std::mt19937 rng(1);
  const auto lp = rohn_transform(efsolver::testing::random_system(rng, 3, 4, 0.1));
  ASSERT_EQ(lp.col_map.size(), 8u);
  std::set<std::pair<std::size_t, BoundSide>> seen;
  for (const auto& cs : lp.col_map) seen.insert(std::make_pair(cs.source, cs.side));
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_TRUE(((lp.p_lo - lp.p_hi).array() <= 0).all());
}

TEST(RohnTransform, RejectsMismatchedRowsAndEqualities) {
  IntervalLinearSystem sys;
  sys.num_vars = 2;
  EXPECT_THROW(sys.add_row(1, {Interval(1)}, Interval(0)), std::invalid_argument);
  sys.add_row(1, {Interval(1), Interval(1)}, Interval(0));
  EXPECT_THROW(rohn_transform(sys, Eigen::MatrixXd::Ones(1, 3), Eigen::VectorXd::Ones(1)),
               std::invalid_argument);
}

TEST(SolveFeasibility, PaperSystemHasResidualTwo) {
  const auto lp = rohn_transform(single_row(Interval(-1, 3), Interval(-3, 1), Interval(-2)));
  const auto sol = solve_feasibility(lp);
  EXPECT_EQ(sol.status, LPStatus::Optimal);
  EXPECT_NEAR(sol.rho, 2.0, 1e-7);
  EXPECT_NEAR(sol.x1.lpNorm<Eigen::Infinity>(), 0.0, 1e-7);
  EXPECT_NEAR(sol.x2.lpNorm<Eigen::Infinity>(), 0.0, 1e-7);
  const Eigen::VectorXd d = residual_vector(lp, sol);
  ASSERT_EQ(d.size(), 1);
  EXPECT_NEAR(d(0), 2.0, 1e-7);
}

TEST(SolveFeasibility, ShrunkPaperSystemIsSolvable) {
  const auto sys = single_row(Interval(2, 3), Interval(-3, 1), Interval(-2));
  const auto sol = solve_feasibility(rohn_transform(sys));
  EXPECT_LE(sol.rho, 0.0);
  EXPECT_LE(efsolver::testing::worst_case_violation(sys.rows[0], to_std(sol.x())), 1e-7);
}

TEST(SolveFeasibility, EqualityOnly) {
  IntervalLinearSystem sys;
  sys.num_vars = 1;
  Eigen::MatrixXd c(1, 1);
  c << 1.0;
  const auto sol = solve_feasibility(rohn_transform(sys, c, Eigen::VectorXd::Ones(1)));
  EXPECT_EQ(sol.status, LPStatus::Unbounded);
  EXPECT_LE(sol.rho, 0.0);
  EXPECT_NEAR(sol.x()(0), 1.0, 1e-9);
}

TEST(SolveFeasibility, EqualitiesAreExact) {
  IntervalLinearSystem sys;
  sys.num_vars = 2;
  sys.add_row(1, {Interval(1, 2), Interval(0.5, 1)}, Interval(-1));
  Eigen::MatrixXd c(1, 2);
  c << 1.0, -1.0;
  const auto sol = solve_feasibility(rohn_transform(sys, c, Eigen::VectorXd::Constant(1, 3.0)));
  EXPECT_NEAR(sol.x()(0) - sol.x()(1), 3.0, 1e-9);
  EXPECT_LE(sol.rho, 0.0);
}

TEST(SolveFeasibility, ContradictoryEqualitiesThrow) {
  IntervalLinearSystem sys;
  sys.num_vars = 1;
  sys.add_row(1, {Interval(1)}, Interval(0));
  Eigen::MatrixXd c(2, 1);
  c << 1.0, 1.0;
  Eigen::VectorXd d(2);
  d << 1.0, 2.0;
  EXPECT_THROW(solve_feasibility(rohn_transform(sys, c, d)), EqualitiesInfeasible);
}

TEST(SolveFeasibility, RecessionDirectionIsUnbounded) {
  IntervalLinearSystem sys;
  sys.num_vars = 1;
  sys.add_row(1, {Interval(1, 2)}, Interval(0));
  const auto sol = solve_feasibility(rohn_transform(sys));
  EXPECT_EQ(sol.status, LPStatus::Unbounded);
  EXPECT_EQ(sol.rho, kUnboundedRho);
  EXPECT_LE(efsolver::testing::worst_case_violation(sys.rows[0], to_std(sol.x())), -1.0 + 1e-9);
}

TEST(ResidualVector, IdenticalRowsGetEqualEntries) {
  IntervalLinearSystem sys;
  sys.num_vars = 2;
  for (BranchId id : {1, 2}) sys.add_row(id, {Interval(-1, 3), Interval(-3, 1)}, Interval(-2));
  const auto lp = rohn_transform(sys);
  const Eigen::VectorXd d = residual_vector(lp, solve_feasibility(lp));
  EXPECT_EQ(d(0), d(1));
}

TEST(ResidualVector, MaxEqualsRho) {
  std::mt19937 rng(21);
  int solvable = 0;
  for (int k = 0; k < 300; ++k) {
    const auto lp = rohn_transform(efsolver::testing::random_system(rng, 1 + k % 5, 1 + k % 3, 0.0));
    const auto sol = solve_feasibility(lp);
    if (sol.status == LPStatus::Unbounded) continue;
    const Eigen::VectorXd d = residual_vector(lp, sol);
    EXPECT_NEAR(d.maxCoeff(), sol.rho, 1e-7);
    if (sol.rho <= 0) {
      ++solvable;
      EXPECT_TRUE((d.array() <= sol.rho + 1e-12).all());
    }
  }
  EXPECT_GT(solvable, 0);
}

TEST(Simplex, SingleUpperBound) {
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Constant(1, -1.0);
  lp.ineq = Eigen::MatrixXd::Ones(1, 1);
  lp.ineq_rhs = Eigen::VectorXd::Ones(1);
  const auto res = simplex_solve(lp);
  ASSERT_EQ(res.status, SimplexStatus::Optimal);
  EXPECT_NEAR(res.w(0), 1.0, 1e-12);
}

TEST(Simplex, FreeVariableLowerBound) {
  // min rho s.t. 2 <= rho, rho free.
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Ones(1);
  lp.ineq = Eigen::MatrixXd::Constant(1, 1, -1.0);
  lp.ineq_rhs = Eigen::VectorXd::Constant(1, -2.0);
  lp.free = {true};
  const auto res = simplex_solve(lp);
  ASSERT_EQ(res.status, SimplexStatus::Optimal);
  EXPECT_NEAR(res.w(0), 2.0, 1e-12);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  LinearProgram lp;
  lp.objective = Eigen::VectorXd::Ones(1);
  lp.ineq = Eigen::MatrixXd::Ones(1, 1);
  lp.ineq_rhs = Eigen::VectorXd::Constant(1, -1.0);
  EXPECT_EQ(simplex_solve(lp).status, SimplexStatus::Infeasible);

  lp.objective = Eigen::VectorXd::Constant(1, -1.0);
  lp.ineq = Eigen::MatrixXd::Constant(1, 1, -1.0);
  EXPECT_EQ(simplex_solve(lp).status, SimplexStatus::Unbounded);
}

TEST(Simplex, EqualityRows) {
  LinearProgram lp;
  lp.objective = Eigen::Vector2d(1.0, 2.0);
  lp.ineq.resize(0, 2);
  lp.ineq_rhs.resize(0);
  lp.eq = Eigen::RowVector2d(1.0, 1.0);
  lp.eq_rhs = Eigen::VectorXd::Constant(1, 4.0);
  const auto res = simplex_solve(lp);
  ASSERT_EQ(res.status, SimplexStatus::Optimal);
  EXPECT_NEAR(res.w(0), 4.0, 1e-12);
  EXPECT_NEAR(res.w(1), 0.0, 1e-12);
  EXPECT_NEAR(res.objective, 4.0, 1e-12);
}

TEST(Simplex, MatchesVertexEnumeration) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> nvars(2, 5);
  int optimal = 0, infeasible = 0;
  for (int k = 0; k < 200; ++k) {
    const int n = nvars(rng);
    const int m = 8 - n;
    // m random rows plus w_j <= 10 keep the region bounded: at most 8 rows.
    Eigen::MatrixXd g(m + n, n);
    Eigen::VectorXd h(m + n);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) g(i, j) = coef(rng);
      h(i) = coef(rng) + 0.3;
    }
    g.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
    h.tail(n).setConstant(10.0);
    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) c(j) = coef(rng);

    LinearProgram lp;
    lp.objective = c;
    lp.ineq = g;
    lp.ineq_rhs = h;
    const auto res = simplex_solve(lp);
    const auto expected = enumerate_vertices(c, g, h);
    if (!expected) {
      EXPECT_EQ(res.status, SimplexStatus::Infeasible) << "case " << k;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(res.status, SimplexStatus::Optimal) << "case " << k;
    EXPECT_NEAR(res.objective, *expected, 1e-6) << "case " << k;
    EXPECT_TRUE(((g * res.w - h).array() <= 1e-9).all());
    EXPECT_TRUE((res.w.array() >= -1e-9).all());
    ++optimal;
  }
  EXPECT_GE(optimal, 5);
  EXPECT_GE(infeasible, 1);
}

TEST(SolveFeasibility, Complementarity) {
  std::mt19937 rng(4);
  for (int k = 0; k < 500; ++k) {
    const auto sys = efsolver::testing::random_system(rng, 1 + k % 6, 1 + k % 4, 0.1);
    const auto sol = solve_feasibility(rohn_transform(sys));
    for (Eigen::Index j = 0; j < sol.x1.size(); ++j) {
      ASSERT_LE(std::min(sol.x1(j), sol.x2(j)), 1e-7)
          << "case " << k << " column " << j << " unbounded " << (sol.status == LPStatus::Unbounded);
    }
    EXPECT_TRUE((sol.x1.array() >= -1e-9).all());
    EXPECT_TRUE((sol.x2.array() >= -1e-9).all());
  }
}

TEST(SolveFeasibility, CertificateIsSound) {
  std::mt19937 rng(9);
  int checked = 0;
  for (int k = 0; k < 400; ++k) {
    const auto sys = efsolver::testing::random_system(rng, 1 + k % 6, 1 + k % 3, 0.0);
    Eigen::MatrixXd c;
    Eigen::VectorXd d;
    if (k % 2 == 0) {
      c = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(sys.num_vars));
      c(0, 0) = 1.0;
      d = Eigen::VectorXd::Constant(1, 0.5);
    }
    const auto sol = solve_feasibility(rohn_transform(sys, c, d));
    if (sol.rho > 0) continue;
    ++checked;
    const auto x = to_std(sol.x());
    for (const auto& row : sys.rows) EXPECT_LE(efsolver::testing::worst_case_violation(row, x), 1e-7);
    if (c.rows() > 0) {
      EXPECT_NEAR((c * sol.x() - d).norm(), 0.0, 1e-7);
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(SolveFeasibility, AgreesWithGridSearch) {
  std::mt19937 rng(13);
  int compared = 0;
  for (int k = 0; k < 30; ++k) {
    auto sys = efsolver::testing::random_system(rng, 1 + k % 4, 1 + k % 3, 0.0);
    efsolver::testing::add_box_rows(sys, 5.0);
    const auto sol = solve_feasibility(rohn_transform(sys));
    const double grid = efsolver::testing::grid_min_violation(sys, 5.0, 0.05);
    if (std::abs(sol.rho) < 1e-3 || std::abs(grid) < 1e-3) continue;
    ++compared;
    EXPECT_EQ(sol.rho <= 0, grid <= 0) << "case " << k << " rho " << sol.rho << " grid " << grid;
  }
  EXPECT_GE(compared, 25);
}

TEST(SolveFeasibility, ShrinkingIntervalsNeverRaisesRho) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const auto sys = efsolver::testing::random_system(rng, 1 + k % 5, 1 + k % 3, 0.0);
    auto shrunk = sys;
    for (auto& row : shrunk.rows) {
      for (auto& p : row.p) {
        const double a = p.lo() + frac(rng) * p.width();
        const double b = p.lo() + frac(rng) * p.width();
        p = Interval(std::min(a, b), std::max(a, b));
      }
      const double a = row.q.lo() + frac(rng) * row.q.width();
      row.q = Interval(a, std::max(a, row.q.hi()));
    }
    const double before = solve_feasibility(rohn_transform(sys)).rho;
    const double after = solve_feasibility(rohn_transform(shrunk)).rho;
    EXPECT_LE(after, before + 1e-9) << "case " << k;
  }
}

TEST(SolveFeasibility, Deterministic) {
  std::mt19937 rng(3);
  const auto lp = rohn_transform(efsolver::testing::random_system(rng, 5, 3, 0.1));
  const auto a = solve_feasibility(lp);
  const auto b = solve_feasibility(lp);
  EXPECT_EQ(a.x1, b.x1);
  EXPECT_EQ(a.x2, b.x2);
  EXPECT_EQ(a.rho, b.rho);
}
