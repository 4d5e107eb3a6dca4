#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "efsolver/expr.hpp"
#include "efsolver/interval.hpp"
#include "efsolver/relaxation.hpp"

namespace efsolver {

enum class Strategy { RoundRobin, SplitWorst, SplitAll };

// How the two trial children of a split are combined into one improvement.
enum class ChildAggregate { Max, Min };

struct HeuristicConfig {
  double epsilon = 0.001;  // >= 0; zero reproduces the degenerate score
  double aging_kappa = 0.1;
  Strategy strategy = Strategy::SplitAll;
  ChildAggregate aggregate = ChildAggregate::Max;
};

// Throws std::invalid_argument on negative epsilon or kappa.
void validate(const HeuristicConfig& cfg);

enum class Sign { Plus, Minus };

// Which expression of a branch a split is meant to tighten: a coefficient of
// the linear atom, its right-hand side, or a guard body.
struct Slot {
  enum class Kind { Coefficient, Rhs, Guard };
  Kind kind = Kind::Coefficient;
  std::size_t index = 0;

  friend auto operator<=>(const Slot&, const Slot&) = default;
};

struct SplitTarget {
  BranchId branch = 0;
  std::size_t row = 0;        // row of the interval linear system
  std::optional<Slot> slot;   // empty: no expression (round-robin, exact row)
  std::size_t variable = 0;   // box dimension, filled in after selection
  Sign sign = Sign::Plus;

  friend bool operator==(const SplitTarget&, const SplitTarget&) = default;
};

// Splits since each (slot, variable) was last chosen, for one branch lineage.
class AgeTable {
 public:
  std::size_t age(const Slot& slot, std::size_t variable) const;
  // Resets (slot, variable) and ages every other variable of the slot.
  void record_split(const Slot& slot, std::size_t variable, std::size_t num_vars);

  friend bool operator==(const AgeTable&, const AgeTable&) = default;

 private:
  std::map<std::pair<Slot, std::size_t>, std::size_t> ages_;
};

// width(p) * (max(x1j, x2j) + epsilon).
double coeff_score(const Interval& p, double x1j, double x2j, double epsilon);

// Sign of x1_j - x2_j, with zero mapped to Plus.
Sign coefficient_sign(double x1j, double x2j);

// Rows to split and the expression to improve in each. Throws
// NoPositiveResidual when sol.rho <= 0.
std::vector<SplitTarget> select_targets(const IntervalLinearSystem& sys,
                                        const FeasibilityLP& lp,
                                        const LPSolution& sol,
                                        const Eigen::VectorXd& d,
                                        const HeuristicConfig& cfg);

// Target for one given row; the slot is empty when every interval of the row
// is a point (no expression can be tightened).
SplitTarget target_for_row(const IntervalLinearSystem& sys,
                           const LPSolution& sol, std::size_t row,
                           const HeuristicConfig& cfg);

// Variable of `box` whose bisection most improves the bound of t selected by
// `sign`, plus the aging bonus kappa * width(t(box)) * age(i). Ties go to the
// lowest index. Throws AllDimensionsDegenerate if no dimension can be split.
std::size_t splitheur(const Expr& t, const Box& box, Sign sign,
                      const std::function<std::size_t(std::size_t)>& age,
                      double kappa,
                      ChildAggregate aggregate = ChildAggregate::Max);

// counter mod s, moving forward past dimensions that cannot be split.
std::size_t round_robin_var(const Box& box, std::size_t counter);

// Widest splittable dimension.
std::size_t widest_var(const Box& box);

}  // namespace efsolver
