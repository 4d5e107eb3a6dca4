#include "efsolver/verifier.hpp"

#include <cmath>
#include <utility>

#include "efsolver/errors.hpp"
#include "efsolver/heuristics.hpp"
#include "efsolver/simplifier.hpp"

namespace efsolver {

namespace {

Truth decide(const Interval& value, bool strict) {
  return classify_guard_interval(GuardAtom{Expr(), strict}, value);
}

class Evaluator {
 public:
  Evaluator(const std::vector<std::string>& x_vars, const Eigen::VectorXd& x)
      : x_vars_(x_vars), x_(x) {}

  // Kleene evaluation over a whole box.
  Truth eval(const Formula& f, const Box& box) const {
    if (f.is_true()) return Truth::True;
    if (f.is_false()) return Truth::False;
    try {
      if (const auto* g = f.as_guard()) return classify_guard(*g, box);
      if (const auto* lin = f.as_linear()) return linear(*lin, box);
    } catch (const DomainError&) {
      return Truth::Undecided;
    }
    const bool is_and = f.as_and() != nullptr;
    const auto& children = is_and ? f.as_and()->children : f.as_or()->children;
    bool undecided = false;
    for (const auto& c : children) {
      const Truth t = eval(c, box);
      if (is_and && t == Truth::False) return Truth::False;
      if (!is_and && t == Truth::True) return Truth::True;
      if (t == Truth::Undecided) undecided = true;
    }
    if (undecided) return Truth::Undecided;
    return is_and ? Truth::True : Truth::False;
  }

 private:
  Truth linear(const LinearAtom& lin, const Box& box) const {
    Interval sum = -eval_on_box(lin.rhs, box);
    for (std::size_t j = 0; j < x_vars_.size(); ++j) {
      const Expr* t = lin.coefficient(x_vars_[j]);
      if (!t) continue;
      sum = sum + Interval(x_(static_cast<Eigen::Index>(j))) * eval_on_box(*t, box);
    }
    return decide(sum, lin.strict);
  }

  const std::vector<std::string>& x_vars_;
  const Eigen::VectorXd& x_;
};

Box point_box(const Box& box) {
  const auto mid = box.midpoint();
  std::vector<Box::Dim> dims;
  dims.reserve(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) dims.emplace_back(box.name(i), Interval(mid[i]));
  return Box(std::move(dims));
}

VerifyResult verify_branch(const Evaluator& ev, std::size_t index,
                           const Branch& branch, const VerifyOptions& opt) {
  std::vector<std::pair<Box, int>> stack{{branch.box, 0}};
  std::size_t visited = 0;
  while (!stack.empty()) {
    auto [box, depth] = std::move(stack.back());
    stack.pop_back();
    if (++visited > opt.max_boxes) return Unknown{index, depth};

    if (ev.eval(branch.formula, box) == Truth::True) continue;
    if (ev.eval(branch.formula, point_box(box)) == Truth::False) {
      return Counterexample{index, box.midpoint(), std::nullopt};
    }
    if (depth >= opt.depth) return Unknown{index, depth};

    std::size_t dim = 0;
    try {
      dim = widest_var(box);
    } catch (const AllDimensionsDegenerate&) {
      return Unknown{index, depth};
    }
    auto [left, right] = split_box(box, dim);
    stack.emplace_back(std::move(right), depth + 1);
    stack.emplace_back(std::move(left), depth + 1);
  }
  return Verified{};
}

}  // namespace

VerifyResult verify_solution(const Problem& p, const Eigen::VectorXd& x,
                             const VerifyOptions& options) {
  if (static_cast<std::size_t>(x.size()) != p.num_x()) {
    throw std::invalid_argument("solution has the wrong number of entries");
  }
  for (std::size_t k = 0; k < p.num_equalities(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const double lhs = p.eq_matrix.row(kk).dot(x);
    if (!(std::fabs(lhs - p.eq_rhs(kk)) <= options.equality_tolerance)) {
      return Counterexample{0, {}, k};
    }
  }
  const Evaluator ev(p.x_vars, x);
  for (std::size_t i = 0; i < p.branches.size(); ++i) {
    VerifyResult r = verify_branch(ev, i, p.branches[i], options);
    if (!std::holds_alternative<Verified>(r)) return r;
  }
  return Verified{};
}

}  // namespace efsolver
