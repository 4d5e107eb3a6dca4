#include "efsolver/problem.hpp"

#include <algorithm>
#include <set>

namespace efsolver {

namespace {

template <typename Fn>
void visit_leaves(const Formula& f, Fn&& fn) {
  if (const auto* a = f.as_and()) {
    for (const auto& c : a->children) visit_leaves(c, fn);
  } else if (const auto* o = f.as_or()) {
    for (const auto& c : o->children) visit_leaves(c, fn);
  } else {
    fn(f);
  }
}

}  // namespace

const Expr* LinearAtom::coefficient(const std::string& name) const {
  for (const auto& [var, expr] : coeffs) {
    if (var == name) return &expr;
  }
  return nullptr;
}

std::size_t count_linear(const Formula& f) {
  std::size_t n = 0;
  visit_leaves(f, [&](const Formula& leaf) { n += leaf.as_linear() ? 1 : 0; });
  return n;
}

const LinearAtom* find_linear(const Formula& f) {
  const LinearAtom* found = nullptr;
  visit_leaves(f, [&](const Formula& leaf) {
    if (!found) found = leaf.as_linear();
  });
  return found;
}

std::vector<const GuardAtom*> guards(const Formula& f) {
  std::vector<const GuardAtom*> out;
  visit_leaves(f, [&](const Formula& leaf) {
    if (const auto* g = leaf.as_guard()) out.push_back(g);
  });
  return out;
}

bool operator==(const Problem& a, const Problem& b) {
  return a.x_vars == b.x_vars && a.y_vars == b.y_vars &&
         a.branches == b.branches && a.eq_matrix.rows() == b.eq_matrix.rows() &&
         a.eq_matrix.cols() == b.eq_matrix.cols() && a.eq_matrix == b.eq_matrix &&
         a.eq_rhs.size() == b.eq_rhs.size() && a.eq_rhs == b.eq_rhs;
}

std::string to_string(Violation::Kind kind) {
  using K = Violation::Kind;
  switch (kind) {
    case K::NoExistentialVariables: return "NoExistentialVariables";
    case K::EmptyBranchList: return "EmptyBranchList";
    case K::BoxMismatch: return "BoxMismatch";
    case K::UndeclaredVariable: return "UndeclaredVariable";
    case K::MultipleLinearAtoms: return "MultipleLinearAtoms";
    case K::ExistentialInGuard: return "ExistentialInGuard";
    case K::ExistentialInCoefficient: return "ExistentialInCoefficient";
    case K::ExistentialInRhs: return "ExistentialInRhs";
    case K::UnknownExistential: return "UnknownExistential";
    case K::EqualityColumnMismatch: return "EqualityColumnMismatch";
  }
  return "Unknown";
}

std::vector<Violation> validate_problem(const Problem& p) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  const std::set<std::string> xs(p.x_vars.begin(), p.x_vars.end());
  const std::set<std::string> ys(p.y_vars.begin(), p.y_vars.end());

  if (p.x_vars.empty()) {
    out.push_back({K::NoExistentialVariables, std::nullopt,
                   "at least one existential variable is required"});
  }
  if (p.branches.empty()) {
    out.push_back({K::EmptyBranchList, std::nullopt, "problem has no branches"});
  }
  if (p.eq_rhs.size() != p.eq_matrix.rows() ||
      (p.eq_matrix.rows() > 0 &&
       p.eq_matrix.cols() != static_cast<Eigen::Index>(p.x_vars.size()))) {
    out.push_back({K::EqualityColumnMismatch, std::nullopt,
                   "equality matrix must have one column per existential "
                   "variable and one row per right-hand side"});
  }

  for (std::size_t b = 0; b < p.branches.size(); ++b) {
    const Branch& br = p.branches[b];
    bool box_ok = br.box.size() == p.y_vars.size();
    for (std::size_t i = 0; box_ok && i < br.box.size(); ++i) {
      box_ok = br.box.name(i) == p.y_vars[i];
    }
    if (!box_ok) {
      out.push_back({K::BoxMismatch, b,
                     "branch box must cover exactly the universal variables "
                     "in declaration order"});
    }

    auto check_y_only = [&](const Expr& e, K kind, const std::string& what) {
      for (const auto& v : variables(e)) {
        if (xs.count(v)) {
          out.push_back({kind, b, "existential variable '" + v + "' in " + what});
        } else if (!ys.count(v)) {
          out.push_back({K::UndeclaredVariable, b,
                         "undeclared variable '" + v + "' in " + what});
        }
      }
    };

    if (count_linear(br.formula) > 1) {
      out.push_back({K::MultipleLinearAtoms, b,
                     "more than one atom mentions the existential variables"});
    }
    for (const GuardAtom* g : guards(br.formula)) {
      check_y_only(g->body, K::ExistentialInGuard, "guard");
    }
    visit_leaves(br.formula, [&](const Formula& leaf) {
      const LinearAtom* lin = leaf.as_linear();
      if (!lin) return;
      for (const auto& [var, coeff] : lin->coeffs) {
        if (!xs.count(var)) {
          out.push_back({K::UnknownExistential, b,
                         "'" + var + "' is not an existential variable"});
        }
        check_y_only(coeff, K::ExistentialInCoefficient,
                     "coefficient of '" + var + "'");
      }
      check_y_only(lin->rhs, K::ExistentialInRhs, "right-hand side");
    });
  }
  return out;
}

}  // namespace efsolver
