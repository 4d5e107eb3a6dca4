#include "efsolver/expr.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace efsolver {

namespace {

const ExprNode& zero_node() {
  static const ExprNode node{};
  return node;
}

std::shared_ptr<const ExprNode> make(ExprKind kind, Expr lhs = Expr(),
                                     Expr rhs = Expr()) {
  auto node = std::make_shared<ExprNode>();
  node->kind = kind;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

void collect(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case ExprKind::Constant: return;
    case ExprKind::Var: out.insert(e.name()); return;
    case ExprKind::Neg:
    case ExprKind::Pow:
    case ExprKind::Sin:
    case ExprKind::Cos: collect(e.lhs(), out); return;
    default:
      collect(e.lhs(), out);
      collect(e.rhs(), out);
  }
}

template <typename Lookup>
double eval_point(const Expr& e, const Lookup& lookup) {
  switch (e.kind()) {
    case ExprKind::Constant: return e.value();
    case ExprKind::Var: return lookup(e.name());
    case ExprKind::Neg: return -eval_point(e.lhs(), lookup);
    case ExprKind::Add: return eval_point(e.lhs(), lookup) + eval_point(e.rhs(), lookup);
    case ExprKind::Sub: return eval_point(e.lhs(), lookup) - eval_point(e.rhs(), lookup);
    case ExprKind::Mul: return eval_point(e.lhs(), lookup) * eval_point(e.rhs(), lookup);
    case ExprKind::Div: return eval_point(e.lhs(), lookup) / eval_point(e.rhs(), lookup);
    case ExprKind::Pow: {
      const double base = eval_point(e.lhs(), lookup);
      double acc = 1.0;
      for (int i = 0; i < e.exponent(); ++i) acc *= base;
      return acc;
    }
    case ExprKind::Sin: return std::sin(eval_point(e.lhs(), lookup));
    case ExprKind::Cos: return std::cos(eval_point(e.lhs(), lookup));
  }
  throw std::logic_error("unknown expression kind");
}

// Binding strength used by the printer; larger binds tighter.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    case ExprKind::Constant: return e.value() < 0.0 || std::signbit(e.value()) ? 3 : 5;
    default: return 5;
  }
}

std::string number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string print(const Expr& e, int min_prec);

std::string wrap(const Expr& e, int min_prec) {
  // Negative literals are always parenthesised inside larger expressions so
  // that "-2" can never be confused with unary minus applied to 2.
  if (e.is_constant() && std::signbit(e.value())) {
    return "(" + number(e.value()) + ")";
  }
  std::string s = print(e, 0);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

std::string print(const Expr& e, int /*min_prec*/) {
  switch (e.kind()) {
    case ExprKind::Constant: return number(e.value());
    case ExprKind::Var: return e.name();
    case ExprKind::Neg:
      if (e.lhs().is_constant()) return "-(" + number(e.lhs().value()) + ")";
      return "-" + wrap(e.lhs(), 3);
    case ExprKind::Add: return wrap(e.lhs(), 1) + " + " + wrap(e.rhs(), 2);
    case ExprKind::Sub: return wrap(e.lhs(), 1) + " - " + wrap(e.rhs(), 2);
    case ExprKind::Mul: return wrap(e.lhs(), 2) + "*" + wrap(e.rhs(), 3);
    case ExprKind::Div: return wrap(e.lhs(), 2) + "/" + wrap(e.rhs(), 3);
    case ExprKind::Pow: return wrap(e.lhs(), 5) + "^" + std::to_string(e.exponent());
    case ExprKind::Sin: return "sin(" + print(e.lhs(), 0) + ")";
    case ExprKind::Cos: return "cos(" + print(e.lhs(), 0) + ")";
  }
  throw std::logic_error("unknown expression kind");
}

}  // namespace

Expr::Expr() = default;

Expr Expr::constant(double value) {
  auto node = std::make_shared<ExprNode>();
  node->kind = ExprKind::Constant;
  node->value = value;
  return Expr(std::move(node));
}

Expr Expr::var(std::string name) {
  auto node = std::make_shared<ExprNode>();
  node->kind = ExprKind::Var;
  node->name = std::move(name);
  return Expr(std::move(node));
}

Expr Expr::neg(Expr operand) { return Expr(make(ExprKind::Neg, std::move(operand))); }
Expr Expr::add(Expr lhs, Expr rhs) { return Expr(make(ExprKind::Add, std::move(lhs), std::move(rhs))); }
Expr Expr::sub(Expr lhs, Expr rhs) { return Expr(make(ExprKind::Sub, std::move(lhs), std::move(rhs))); }
Expr Expr::mul(Expr lhs, Expr rhs) { return Expr(make(ExprKind::Mul, std::move(lhs), std::move(rhs))); }
Expr Expr::div(Expr lhs, Expr rhs) { return Expr(make(ExprKind::Div, std::move(lhs), std::move(rhs))); }
Expr Expr::sin(Expr operand) { return Expr(make(ExprKind::Sin, std::move(operand))); }
Expr Expr::cos(Expr operand) { return Expr(make(ExprKind::Cos, std::move(operand))); }

Expr Expr::pow(Expr base, int exponent) {
  if (exponent < 1) {
    throw std::invalid_argument("power exponent must be a positive integer");
  }
  auto node = std::make_shared<ExprNode>();
  node->kind = ExprKind::Pow;
  node->exponent = exponent;
  node->lhs = std::move(base);
  return Expr(std::move(node));
}

ExprKind Expr::kind() const { return node_ ? node_->kind : ExprKind::Constant; }
double Expr::value() const { return node_ ? node_->value : 0.0; }
const std::string& Expr::name() const { return (node_ ? *node_ : zero_node()).name; }
int Expr::exponent() const { return node_ ? node_->exponent : 1; }
const Expr& Expr::lhs() const { return (node_ ? *node_ : zero_node()).lhs; }
const Expr& Expr::rhs() const { return (node_ ? *node_ : zero_node()).rhs; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::Constant:
      return a.value() == b.value() && std::signbit(a.value()) == std::signbit(b.value());
    case ExprKind::Var: return a.name() == b.name();
    case ExprKind::Pow: return a.exponent() == b.exponent() && a.lhs() == b.lhs();
    case ExprKind::Neg:
    case ExprKind::Sin:
    case ExprKind::Cos: return a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

std::set<std::string> variables(const Expr& e) {
  std::set<std::string> out;
  collect(e, out);
  return out;
}

bool mentions(const Expr& e, const std::string& name) {
  switch (e.kind()) {
    case ExprKind::Constant: return false;
    case ExprKind::Var: return e.name() == name;
    case ExprKind::Neg:
    case ExprKind::Pow:
    case ExprKind::Sin:
    case ExprKind::Cos: return mentions(e.lhs(), name);
    default: return mentions(e.lhs(), name) || mentions(e.rhs(), name);
  }
}

Interval eval_on_box(const Expr& e, const Box& box) {
  switch (e.kind()) {
    case ExprKind::Constant: return Interval(e.value());
    case ExprKind::Var: {
      const Interval* iv = box.find(e.name());
      if (!iv) {
        throw std::invalid_argument("variable '" + e.name() +
                                    "' is not part of the box");
      }
      return *iv;
    }
    case ExprKind::Neg: return -eval_on_box(e.lhs(), box);
    case ExprKind::Add: return eval_on_box(e.lhs(), box) + eval_on_box(e.rhs(), box);
    case ExprKind::Sub: return eval_on_box(e.lhs(), box) - eval_on_box(e.rhs(), box);
    case ExprKind::Mul: return eval_on_box(e.lhs(), box) * eval_on_box(e.rhs(), box);
    case ExprKind::Div: return eval_on_box(e.lhs(), box) / eval_on_box(e.rhs(), box);
    case ExprKind::Pow: return pow(eval_on_box(e.lhs(), box), e.exponent());
    case ExprKind::Sin: return sin(eval_on_box(e.lhs(), box));
    case ExprKind::Cos: return cos(eval_on_box(e.lhs(), box));
  }
  throw std::logic_error("unknown expression kind");
}

double eval_at(const Expr& e, std::span<const std::string> names,
               std::span<const double> values) {
  auto lookup = [&](const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return values[i];
    }
    throw std::invalid_argument("no value bound to variable '" + name + "'");
  };
  return eval_point(e, lookup);
}

double eval_at(const Expr& e,
               const std::function<double(const std::string&)>& lookup) {
  return eval_point(e, lookup);
}

std::string to_string(const Expr& e) {
  if (e.is_constant()) return number(e.value());
  return print(e, 0);
}

}  // namespace efsolver
