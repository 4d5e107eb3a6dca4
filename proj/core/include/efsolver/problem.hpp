#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "efsolver/expr.hpp"
#include "efsolver/interval.hpp"

namespace efsolver {

// y-only inequality normalized to `body <= 0` (or `body < 0` when strict).
struct GuardAtom {
  Expr body;
  bool strict = false;

  friend bool operator==(const GuardAtom&, const GuardAtom&) = default;
};

// sum_j coeffs[j].second * x_j <= rhs, coefficients and rhs over y only.
// `strict` records a written "<"; the solver always demands a negative
// residual, so both forms are solved identically.
struct LinearAtom {
  std::vector<std::pair<std::string, Expr>> coeffs;
  Expr rhs;
  bool strict = false;

  // Coefficient expression of x-variable `name`, nullptr if absent.
  const Expr* coefficient(const std::string& name) const;

  friend bool operator==(const LinearAtom&, const LinearAtom&) = default;
};

struct Formula;

struct TrueFormula {
  friend bool operator==(const TrueFormula&, const TrueFormula&) = default;
};
struct FalseFormula {
  friend bool operator==(const FalseFormula&, const FalseFormula&) = default;
};
struct AndFormula {
  std::vector<Formula> children;
  friend bool operator==(const AndFormula&, const AndFormula&);
};
struct OrFormula {
  std::vector<Formula> children;
  friend bool operator==(const OrFormula&, const OrFormula&);
};

// Positive Boolean combination of guard atoms and (at most) one linear atom.
struct Formula {
  using Node = std::variant<TrueFormula, FalseFormula, GuardAtom, LinearAtom,
                            AndFormula, OrFormula>;
  Node node;

  static Formula truth() { return {TrueFormula{}}; }
  static Formula falsity() { return {FalseFormula{}}; }
  static Formula guard(GuardAtom g) { return {std::move(g)}; }
  static Formula linear(LinearAtom a) { return {std::move(a)}; }
  static Formula conj(std::vector<Formula> children) {
    return {AndFormula{std::move(children)}};
  }
  static Formula disj(std::vector<Formula> children) {
    return {OrFormula{std::move(children)}};
  }

  bool is_true() const { return std::holds_alternative<TrueFormula>(node); }
  bool is_false() const { return std::holds_alternative<FalseFormula>(node); }
  const GuardAtom* as_guard() const { return std::get_if<GuardAtom>(&node); }
  const LinearAtom* as_linear() const { return std::get_if<LinearAtom>(&node); }
  const AndFormula* as_and() const { return std::get_if<AndFormula>(&node); }
  const OrFormula* as_or() const { return std::get_if<OrFormula>(&node); }

  friend bool operator==(const Formula&, const Formula&) = default;
};

inline bool operator==(const AndFormula& a, const AndFormula& b) {
  return a.children == b.children;
}
inline bool operator==(const OrFormula& a, const OrFormula& b) {
  return a.children == b.children;
}

// Number of Linear leaves in the tree.
std::size_t count_linear(const Formula& f);
// First Linear leaf in depth-first order, or nullptr.
const LinearAtom* find_linear(const Formula& f);
// Guard leaves in depth-first order.
std::vector<const GuardAtom*> guards(const Formula& f);

// One conjunct: for all y in box, formula.
struct Branch {
  Box box;
  Formula formula;

  friend bool operator==(const Branch&, const Branch&) = default;
};

// exists x. (and_i forall y in B_i. phi_i) and C x = d.
struct Problem {
  std::vector<std::string> x_vars;
  std::vector<std::string> y_vars;
  std::vector<Branch> branches;
  Eigen::MatrixXd eq_matrix;  // n_eq x r
  Eigen::VectorXd eq_rhs;     // n_eq

  std::size_t num_x() const { return x_vars.size(); }
  std::size_t num_y() const { return y_vars.size(); }
  std::size_t num_equalities() const {
    return static_cast<std::size_t>(eq_rhs.size());
  }

  friend bool operator==(const Problem& a, const Problem& b);
};

struct Violation {
  enum class Kind {
    NoExistentialVariables,
    EmptyBranchList,
    BoxMismatch,
    UndeclaredVariable,
    MultipleLinearAtoms,
    ExistentialInGuard,
    ExistentialInCoefficient,
    ExistentialInRhs,
    UnknownExistential,
    EqualityColumnMismatch,
  };

  Kind kind;
  std::optional<std::size_t> branch;
  std::string message;
};

std::string to_string(Violation::Kind kind);

// Structural checks; an empty result means the problem is solvable input.
std::vector<Violation> validate_problem(const Problem& p);

}  // namespace efsolver
