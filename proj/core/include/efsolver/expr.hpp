#pragma once

#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "efsolver/interval.hpp"

namespace efsolver {

enum class ExprKind { Constant, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos };

struct ExprNode;

// Immutable arithmetic expression tree. Copies share structure.
class Expr {
 public:
  Expr();  // the constant 0

  static Expr constant(double value);
  static Expr var(std::string name);
  static Expr neg(Expr operand);
  static Expr add(Expr lhs, Expr rhs);
  static Expr sub(Expr lhs, Expr rhs);
  static Expr mul(Expr lhs, Expr rhs);
  static Expr div(Expr lhs, Expr rhs);
  // Throws std::invalid_argument unless exponent >= 1.
  static Expr pow(Expr base, int exponent);
  static Expr sin(Expr operand);
  static Expr cos(Expr operand);

  ExprKind kind() const;
  double value() const;             // Constant
  const std::string& name() const;  // Var
  int exponent() const;             // Pow
  // Neg/Sin/Cos/Pow use lhs() as the single operand.
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_constant() const { return kind() == ExprKind::Constant; }
  bool is_var() const { return kind() == ExprKind::Var; }

  // Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  ExprKind kind = ExprKind::Constant;
  double value = 0.0;
  std::string name;
  int exponent = 1;
  Expr lhs;
  Expr rhs;
};

inline Expr operator+(Expr a, Expr b) { return Expr::add(std::move(a), std::move(b)); }
inline Expr operator-(Expr a, Expr b) { return Expr::sub(std::move(a), std::move(b)); }
inline Expr operator*(Expr a, Expr b) { return Expr::mul(std::move(a), std::move(b)); }
inline Expr operator/(Expr a, Expr b) { return Expr::div(std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return Expr::neg(std::move(a)); }

// Names of all variables occurring in the expression.
std::set<std::string> variables(const Expr& e);
bool mentions(const Expr& e, const std::string& name);

// Interval enclosure of {e(y) : y in box} by recursive interval arithmetic.
// Throws std::invalid_argument for variables missing from the box and
// DomainError from the interval operators.
Interval eval_on_box(const Expr& e, const Box& box);

// Plain floating-point evaluation at a point; `names[i]` is bound to
// `values[i]`.
double eval_at(const Expr& e, std::span<const std::string> names,
               std::span<const double> values);

// Variant used by the point-sampling code paths: the lookup maps a variable
// name to its value.
double eval_at(const Expr& e,
               const std::function<double(const std::string&)>& lookup);

// Infix rendering that the problem parser reads back to the same tree.
std::string to_string(const Expr& e);

}  // namespace efsolver
