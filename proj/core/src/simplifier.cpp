#include "efsolver/simplifier.hpp"

namespace efsolver {

Truth classify_guard_interval(const GuardAtom& g, const Interval& enclosure) {
  if (g.strict) {
    if (enclosure.hi() < 0.0) return Truth::True;
    if (enclosure.lo() >= 0.0) return Truth::False;
  } else {
    if (enclosure.hi() <= 0.0) return Truth::True;
    if (enclosure.lo() > 0.0) return Truth::False;
  }
  return Truth::Undecided;
}

Truth classify_guard(const GuardAtom& g, const Box& box) {
  return classify_guard_interval(g, eval_on_box(g.body, box));
}

namespace {

// One bottom-up pass; children are simplified first so constants bubble up.
Formula simplify_once(const Formula& f) {
  const bool is_and = f.as_and() != nullptr;
  const bool is_or = f.as_or() != nullptr;
  if (!is_and && !is_or) return f;

  const auto& children = is_and ? f.as_and()->children : f.as_or()->children;
  std::vector<Formula> kept;
  for (const auto& c : children) {
    Formula s = simplify_once(c);
    // Absorbing element: F in a conjunction, T in a disjunction.
    if (is_and && s.is_false()) return Formula::falsity();
    if (is_or && s.is_true()) return Formula::truth();
    // Neutral element.
    if (is_and && s.is_true()) continue;
    if (is_or && s.is_false()) continue;
    // Flatten same-kind nesting.
    if (is_and && s.as_and()) {
      for (auto& g : s.as_and()->children) kept.push_back(g);
      continue;
    }
    if (is_or && s.as_or()) {
      for (auto& g : s.as_or()->children) kept.push_back(g);
      continue;
    }
    kept.push_back(std::move(s));
  }
  if (kept.empty()) return is_and ? Formula::truth() : Formula::falsity();
  if (kept.size() == 1) return std::move(kept.front());
  return is_and ? Formula::conj(std::move(kept)) : Formula::disj(std::move(kept));
}

}  // namespace

Formula bool_simplify(const Formula& f) {
  Formula current = simplify_once(f);
  while (true) {
    Formula again = simplify_once(current);
    if (again == current) return current;
    current = std::move(again);
  }
}

Formula substitute_guards(const Formula& f, const Box& box) {
  if (const auto* g = f.as_guard()) {
    switch (classify_guard(*g, box)) {
      case Truth::True: return Formula::truth();
      case Truth::False: return Formula::falsity();
      case Truth::Undecided: return f;
    }
  }
  if (const auto* a = f.as_and()) {
    std::vector<Formula> c;
    c.reserve(a->children.size());
    for (const auto& child : a->children) c.push_back(substitute_guards(child, box));
    return Formula::conj(std::move(c));
  }
  if (const auto* o = f.as_or()) {
    std::vector<Formula> c;
    c.reserve(o->children.size());
    for (const auto& child : o->children) c.push_back(substitute_guards(child, box));
    return Formula::disj(std::move(c));
  }
  return f;
}

BranchStatus simplify_branch(const Formula& formula, const Box& box,
                             const std::vector<std::string>& x_vars) {
  const Formula reduced = bool_simplify(substitute_guards(formula, box));
  if (reduced.is_true()) return ProvedTrue{};
  if (reduced.is_false()) return ProvedFalse{};
  if (const auto* lin = reduced.as_linear()) {
    LinearRow row;
    row.p.reserve(x_vars.size());
    for (const auto& x : x_vars) {
      const Expr* t = lin->coefficient(x);
      row.p.push_back(t ? eval_on_box(*t, box) : Interval(0.0));
    }
    row.q = eval_on_box(lin->rhs, box);
    return row;
  }
  return Undecided{reduced};
}

BranchStatus simplify_branch(const Branch& branch,
                             const std::vector<std::string>& x_vars) {
  return simplify_branch(branch.formula, branch.box, x_vars);
}

}  // namespace efsolver
