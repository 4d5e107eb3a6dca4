#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "efsolver/interval.hpp"
#include "efsolver/problem.hpp"

namespace efsolver {

enum class Truth { True, False, Undecided };

// Decides a guard over a whole box from its interval enclosure I:
//   body <= 0 : True if hi(I) <= 0, False if lo(I) > 0
//   body <  0 : True if hi(I) <  0, False if lo(I) >= 0
Truth classify_guard(const GuardAtom& g, const Box& box);
Truth classify_guard_interval(const GuardAtom& g, const Interval& enclosure);

// Propagates Boolean constants and flattens nested And/Or until nothing
// changes. The result contains a constant only if it is one.
Formula bool_simplify(const Formula& f);

struct ProvedTrue {};
struct ProvedFalse {};

// The branch reduced to one interval inequality p . x <= q.
struct LinearRow {
  std::vector<Interval> p;  // one entry per existential variable
  Interval q;
};

struct Undecided {
  Formula residual;
};

using BranchStatus = std::variant<ProvedTrue, ProvedFalse, LinearRow, Undecided>;

// Substitutes guard decisions over `box`, simplifies, and classifies.
// Coefficients of x-variables absent from the linear atom are [0, 0].
BranchStatus simplify_branch(const Formula& formula, const Box& box,
                             const std::vector<std::string>& x_vars);
BranchStatus simplify_branch(const Branch& branch,
                             const std::vector<std::string>& x_vars);

// Replaces decided guard leaves by constants without simplifying.
Formula substitute_guards(const Formula& f, const Box& box);

}  // namespace efsolver
