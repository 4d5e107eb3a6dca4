#include "efsolver/parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "efsolver/errors.hpp"

namespace efsolver {

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      tok.kind = Tok::Ident;
      tok.text = std::string(src.substr(i, j - i));
      if (tok.text == "forall" && src.substr(j, 5) == "-vars") {
        tok.text = "forall-vars";
        j += 5;
      }
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < src.size() &&
                std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      auto digits = [&] {
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      };
      digits();
      if (j < src.size() && src[j] == '.') {
        ++j;
        digits();
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          j = k;
          digits();
        }
      }
      tok.kind = Tok::Number;
      tok.text = std::string(src.substr(i, j - i));
      const auto res = std::from_chars(tok.text.data(),
                                       tok.text.data() + tok.text.size(),
                                       tok.number);
      if (res.ec != std::errc() || res.ptr != tok.text.data() + tok.text.size()) {
        throw ParseError("malformed number '" + tok.text + "'", line, col);
      }
      advance(j - i);
    } else {
      static const char* const two[] = {"<=", ">="};
      tok.kind = Tok::Punct;
      tok.text = std::string(1, c);
      for (const char* t : two) {
        if (src.substr(i, 2) == t) tok.text = t;
      }
      if (std::string_view("+-*/^()[],:;=<>").find(c) == std::string_view::npos) {
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
      advance(tok.text.size());
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"exists", "forall-vars", "branch",
                                          "in",     "eq",          "and",
                                          "or",     "sin",         "cos",
                                          "true",   "false"};
  return k;
}

// Decomposition of an expression as sum_j coeff_j * x_j + constant.
// A coefficient of nullopt inside `present` means an implicit unit factor
// (the bare variable), so that `t*x` yields exactly `t`.
struct LinearForm {
  std::vector<bool> present;
  std::vector<std::optional<Expr>> coeff;
  std::optional<Expr> constant;

  explicit LinearForm(std::size_t r) : present(r, false), coeff(r) {}

  bool has_x() const {
    for (bool p : present) {
      if (p) return true;
    }
    return false;
  }
  Expr materialized(std::size_t j) const {
    return coeff[j] ? *coeff[j] : Expr::constant(1.0);
  }
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Problem run() {
    Problem p;
    bool have_exists = false;
    bool have_forall = false;
    std::vector<std::vector<double>> eq_rows;
    std::vector<double> eq_rhs;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (is_word("exists")) {
        if (have_exists) fail("duplicate 'exists' declaration", t);
        next();
        p.x_vars = declare_list();
        x_ = p.x_vars;
        have_exists = true;
      } else if (is_word("forall-vars")) {
        if (have_forall) fail("duplicate 'forall-vars' declaration", t);
        next();
        p.y_vars = declare_list();
        y_ = p.y_vars;
        have_forall = true;
      } else if (is_word("branch")) {
        require_declarations(have_exists, have_forall, t);
        next();
        p.branches.push_back(branch(p));
      } else if (is_word("eq")) {
        require_declarations(have_exists, have_forall, t);
        next();
        auto [row, rhs] = equality();
        eq_rows.push_back(std::move(row));
        eq_rhs.push_back(rhs);
      } else {
        fail("expected 'exists', 'forall-vars', 'branch' or 'eq'", t);
      }
    }
    if (!have_exists) fail("missing 'exists' declaration", peek());
    if (!have_forall) fail("missing 'forall-vars' declaration", peek());
    p.eq_matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(eq_rows.size()),
                                        static_cast<Eigen::Index>(p.x_vars.size()));
    p.eq_rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(eq_rhs.size()));
    for (std::size_t i = 0; i < eq_rows.size(); ++i) {
      for (std::size_t j = 0; j < p.x_vars.size(); ++j) {
        p.eq_matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            eq_rows[i][j];
      }
      p.eq_rhs(static_cast<Eigen::Index>(i)) = eq_rhs[i];
    }
    return p;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> x_;
  std::vector<std::string> y_;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  bool is_punct(const char* s) const {
    return peek().kind == Tok::Punct && peek().text == s;
  }
  bool is_word(const char* s) const {
    return peek().kind == Tok::Ident && peek().text == s;
  }
  [[noreturn]] static void fail(const std::string& msg, const Token& at) {
    throw ParseError(msg, at.line, at.column);
  }
  void expect(const char* s) {
    if (!is_punct(s)) {
      fail(std::string("expected '") + s + "'" + found(), peek());
    }
    next();
  }
  void expect_word(const char* s) {
    if (!is_word(s)) fail(std::string("expected '") + s + "'" + found(), peek());
    next();
  }
  std::string found() const {
    return peek().kind == Tok::End ? " at end of input"
                                   : " but found '" + peek().text + "'";
  }

  void require_declarations(bool ex, bool fa, const Token& t) {
    if (!ex || !fa) {
      fail("'exists' and 'forall-vars' must be declared before branches "
           "and equalities",
           t);
    }
  }

  bool is_x(const std::string& n) const {
    return std::find(x_.begin(), x_.end(), n) != x_.end();
  }
  bool is_y(const std::string& n) const {
    return std::find(y_.begin(), y_.end(), n) != y_.end();
  }

  std::vector<std::string> declare_list() {
    std::vector<std::string> names;
    while (!is_punct(";")) {
      const Token& t = peek();
      if (t.kind != Tok::Ident || keywords().count(t.text)) {
        fail("expected a variable name" + found(), t);
      }
      if (is_x(t.text) || is_y(t.text) ||
          std::find(names.begin(), names.end(), t.text) != names.end()) {
        fail("variable '" + t.text + "' declared twice", t);
      }
      names.push_back(t.text);
      next();
    }
    if (names.empty()) fail("declaration needs at least one variable", peek());
    next();
    return names;
  }

  double signed_number() {
    double sign = 1.0;
    if (is_punct("-")) {
      sign = -1.0;
      next();
    } else if (is_punct("+")) {
      next();
    }
    if (peek().kind != Tok::Number) fail("expected a number" + found(), peek());
    return sign * next().number;
  }

  Branch branch(const Problem& p) {
    std::vector<std::optional<Interval>> dims(p.y_vars.size());
    const Token& start = peek();
    while (true) {
      const Token& name = peek();
      if (name.kind != Tok::Ident) fail("expected a universal variable" + found(), name);
      const auto it = std::find(y_.begin(), y_.end(), name.text);
      if (it == y_.end()) {
        if (is_x(name.text)) {
          fail("existential variable '" + name.text + "' cannot bound a box", name);
        }
        throw UndeclaredVariable(name.text, name.line, name.column);
      }
      const auto idx = static_cast<std::size_t>(it - y_.begin());
      if (dims[idx]) fail("variable '" + name.text + "' bounded twice", name);
      next();
      expect_word("in");
      const Token& bracket = peek();
      expect("[");
      const double lo = signed_number();
      expect(",");
      const double hi = signed_number();
      expect("]");
      if (!(lo <= hi)) fail("empty interval: lower bound exceeds upper", bracket);
      dims[idx] = Interval(lo, hi);
      if (is_punct(",")) {
        next();
        continue;
      }
      break;
    }
    expect(":");
    std::vector<Box::Dim> box;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (!dims[i]) fail("branch does not bound variable '" + y_[i] + "'", start);
      box.emplace_back(y_[i], *dims[i]);
    }
    Formula f = formula();
    expect(";");
    return Branch{Box(std::move(box)), std::move(f)};
  }

  std::pair<std::vector<double>, double> equality() {
    const Token& start = peek();
    const Expr lhs = expr();
    expect("=");
    const Expr rhs = expr();
    expect(";");
    const LinearForm l = decompose(lhs, start);
    const LinearForm r = decompose(rhs, start);
    auto constant = [&](const Expr& e) {
      if (!variables(e).empty()) {
        fail("equality coefficients must be numeric constants", start);
      }
      return eval_at(e, [](const std::string&) -> double { return 0.0; });
    };
    std::vector<double> row(x_.size(), 0.0);
    for (std::size_t j = 0; j < x_.size(); ++j) {
      if (l.present[j]) row[j] += constant(l.materialized(j));
      if (r.present[j]) row[j] -= constant(r.materialized(j));
    }
    double d = 0.0;
    if (r.constant) d += constant(*r.constant);
    if (l.constant) d -= constant(*l.constant);
    return {row, d};
  }

  // FORMULA := DISJ ("and" DISJ)*
  Formula formula() {
    std::vector<Formula> parts;
    parts.push_back(disjunction());
    while (is_word("and")) {
      next();
      parts.push_back(disjunction());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return Formula::conj(std::move(parts));
  }

  // DISJ := UNIT ("or" UNIT)*
  Formula disjunction() {
    std::vector<Formula> parts;
    parts.push_back(unit());
    while (is_word("or")) {
      next();
      parts.push_back(unit());
    }
    if (parts.size() == 1) return std::move(parts.front());
    return Formula::disj(std::move(parts));
  }

  // UNIT := ATOM | "(" FORMULA ")" | "true" | "false"
  Formula unit() {
    if (is_word("true")) {
      next();
      return Formula::truth();
    }
    if (is_word("false")) {
      next();
      return Formula::falsity();
    }
    if (is_punct("(")) {
      const std::size_t saved = pos_;
      try {
        return atom();
      } catch (const UndeclaredVariable&) {
        throw;
      } catch (const ParseError&) {
        pos_ = saved;
      }
      next();
      Formula inner = formula();
      expect(")");
      return inner;
    }
    return atom();
  }

  Formula atom() {
    const Token& start = peek();
    const Expr lhs = expr();
    const Token& op = peek();
    if (op.kind != Tok::Punct ||
        (op.text != "<=" && op.text != "<" && op.text != ">=" && op.text != ">")) {
      fail("expected a comparison operator" + found(), op);
    }
    const std::string cmp = op.text;
    next();
    const Expr rhs = expr();
    const bool strict = cmp == "<" || cmp == ">";
    const bool less = cmp == "<=" || cmp == "<";
    // Normalize to small <= large.
    const Expr& small = less ? lhs : rhs;
    const Expr& large = less ? rhs : lhs;

    const bool linear = mentions_x(lhs) || mentions_x(rhs);
    if (!linear) {
      GuardAtom g;
      g.strict = strict;
      g.body = is_literal_zero(large) ? small : Expr::sub(small, large);
      return Formula::guard(std::move(g));
    }
    const LinearForm s = decompose(small, start);
    const LinearForm l = decompose(large, start);
    LinearAtom a;
    a.strict = strict;
    for (std::size_t j = 0; j < x_.size(); ++j) {
      if (!s.present[j] && !l.present[j]) continue;
      Expr c;
      if (s.present[j] && l.present[j]) {
        c = Expr::sub(s.materialized(j), l.materialized(j));
      } else if (s.present[j]) {
        c = s.materialized(j);
      } else {
        c = Expr::neg(l.materialized(j));
      }
      a.coeffs.emplace_back(x_[j], std::move(c));
    }
    if (l.constant && s.constant) {
      a.rhs = Expr::sub(*l.constant, *s.constant);
    } else if (l.constant) {
      a.rhs = *l.constant;
    } else if (s.constant) {
      a.rhs = Expr::neg(*s.constant);
    } else {
      a.rhs = Expr::constant(0.0);
    }
    return Formula::linear(std::move(a));
  }

  static bool is_literal_zero(const Expr& e) {
    return e.is_constant() && e.value() == 0.0 && !std::signbit(e.value());
  }

  bool mentions_x(const Expr& e) const {
    for (const auto& v : variables(e)) {
      if (is_x(v)) return true;
    }
    return false;
  }

  LinearForm decompose(const Expr& e, const Token& at) const {
    const std::size_t r = x_.size();
    LinearForm out(r);
    switch (e.kind()) {
      case ExprKind::Constant:
        out.constant = e;
        return out;
      case ExprKind::Var: {
        const auto it = std::find(x_.begin(), x_.end(), e.name());
        if (it == x_.end()) {
          out.constant = e;
        } else {
          out.present[static_cast<std::size_t>(it - x_.begin())] = true;
        }
        return out;
      }
      default:
        break;
    }
    if (!mentions_x(e)) {
      out.constant = e;
      return out;
    }
    auto nonlinear = [&]() -> LinearForm {
      fail("atom is not linear in the existential variables", at);
    };
    switch (e.kind()) {
      case ExprKind::Neg: {
        const LinearForm a = decompose(e.lhs(), at);
        for (std::size_t j = 0; j < r; ++j) {
          if (!a.present[j]) continue;
          out.present[j] = true;
          out.coeff[j] = a.coeff[j] ? Expr::neg(*a.coeff[j]) : Expr::constant(-1.0);
        }
        if (a.constant) out.constant = Expr::neg(*a.constant);
        return out;
      }
      case ExprKind::Add:
      case ExprKind::Sub: {
        const bool add = e.kind() == ExprKind::Add;
        const LinearForm a = decompose(e.lhs(), at);
        const LinearForm b = decompose(e.rhs(), at);
        for (std::size_t j = 0; j < r; ++j) {
          if (a.present[j] && b.present[j]) {
            out.coeff[j] = add ? Expr::add(a.materialized(j), b.materialized(j))
                               : Expr::sub(a.materialized(j), b.materialized(j));
          } else if (a.present[j]) {
            out.coeff[j] = a.coeff[j];
          } else if (b.present[j]) {
            out.coeff[j] = add ? b.coeff[j]
                               : std::optional<Expr>(Expr::neg(b.materialized(j)));
          } else {
            continue;
          }
          out.present[j] = true;
        }
        if (a.constant && b.constant) {
          out.constant = add ? Expr::add(*a.constant, *b.constant)
                             : Expr::sub(*a.constant, *b.constant);
        } else if (a.constant) {
          out.constant = a.constant;
        } else if (b.constant) {
          out.constant = add ? *b.constant : Expr::neg(*b.constant);
        }
        return out;
      }
      case ExprKind::Mul: {
        const bool left_x = mentions_x(e.lhs());
        const bool right_x = mentions_x(e.rhs());
        if (left_x && right_x) return nonlinear();
        const LinearForm a = decompose(left_x ? e.lhs() : e.rhs(), at);
        const Expr& factor = left_x ? e.rhs() : e.lhs();
        for (std::size_t j = 0; j < r; ++j) {
          if (!a.present[j]) continue;
          out.present[j] = true;
          if (!a.coeff[j]) {
            out.coeff[j] = factor;
          } else {
            out.coeff[j] = left_x ? Expr::mul(*a.coeff[j], factor)
                                  : Expr::mul(factor, *a.coeff[j]);
          }
        }
        if (a.constant) {
          out.constant = left_x ? Expr::mul(*a.constant, factor)
                                : Expr::mul(factor, *a.constant);
        }
        return out;
      }
      case ExprKind::Div: {
        if (mentions_x(e.rhs())) return nonlinear();
        const LinearForm a = decompose(e.lhs(), at);
        for (std::size_t j = 0; j < r; ++j) {
          if (!a.present[j]) continue;
          out.present[j] = true;
          out.coeff[j] = Expr::div(a.materialized(j), e.rhs());
        }
        if (a.constant) out.constant = Expr::div(*a.constant, e.rhs());
        return out;
      }
      case ExprKind::Pow:
        if (e.exponent() == 1) return decompose(e.lhs(), at);
        return nonlinear();
      default:
        return nonlinear();
    }
  }

  // EXPR := TERM (("+" | "-") TERM)*
  Expr expr() {
    Expr lhs = term();
    while (is_punct("+") || is_punct("-")) {
      const bool add = next().text == "+";
      Expr rhs = term();
      lhs = add ? Expr::add(std::move(lhs), std::move(rhs))
                : Expr::sub(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  // TERM := UNARY (("*" | "/") UNARY)*
  Expr term() {
    Expr lhs = unary();
    while (is_punct("*") || is_punct("/")) {
      const bool mul = next().text == "*";
      Expr rhs = unary();
      lhs = mul ? Expr::mul(std::move(lhs), std::move(rhs))
                : Expr::div(std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  // UNARY := "-" UNARY | POWER. A minus directly before a literal that is not
  // raised to a power folds into a negative constant.
  Expr unary() {
    if (is_punct("-")) {
      next();
      if (peek().kind == Tok::Number &&
          !(toks_[pos_ + 1].kind == Tok::Punct && toks_[pos_ + 1].text == "^")) {
        return Expr::constant(-next().number);
      }
      return Expr::neg(unary());
    }
    if (is_punct("+")) {
      next();
      return unary();
    }
    return power();
  }

  // POWER := PRIMARY ("^" INTEGER)*
  Expr power() {
    Expr base = primary();
    while (is_punct("^")) {
      next();
      const Token& t = peek();
      if (t.kind != Tok::Number || t.number != static_cast<int>(t.number) ||
          t.number < 1 || t.number > 1000) {
        fail("exponent must be a positive integer literal", t);
      }
      base = Expr::pow(std::move(base), static_cast<int>(t.number));
      next();
    }
    return base;
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      return Expr::constant(t.number);
    }
    if (t.kind == Tok::Punct && t.text == "(") {
      next();
      Expr inner = expr();
      expect(")");
      return inner;
    }
    if (t.kind == Tok::Ident && (t.text == "sin" || t.text == "cos")) {
      const bool is_sin = t.text == "sin";
      next();
      expect("(");
      Expr arg = expr();
      expect(")");
      return is_sin ? Expr::sin(std::move(arg)) : Expr::cos(std::move(arg));
    }
    if (t.kind == Tok::Ident && !keywords().count(t.text)) {
      if (!is_x(t.text) && !is_y(t.text)) {
        throw UndeclaredVariable(t.text, t.line, t.column);
      }
      next();
      return Expr::var(t.text);
    }
    fail("expected an expression" + found(), t);
  }
};

std::string print_formula_child(const Formula& f, bool inside_or) {
  const bool needs_parens = f.as_and() || (inside_or && f.as_or());
  const std::string s = print_formula(f);
  return needs_parens ? "(" + s + ")" : s;
}

std::string print_linear(const LinearAtom& a) {
  std::string lhs;
  for (const auto& [var, coeff] : a.coeffs) {
    if (!lhs.empty()) lhs += " + ";
    lhs += to_string(Expr::mul(coeff, Expr::var(var)));
  }
  if (lhs.empty()) lhs = "0";
  return lhs + (a.strict ? " < " : " <= ") + to_string(a.rhs);
}

}  // namespace

Problem parse_problem(std::string_view text) { return Parser(text).run(); }

Problem parse_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open problem file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string print_formula(const Formula& f) {
  if (f.is_true()) return "true";
  if (f.is_false()) return "false";
  if (const auto* g = f.as_guard()) {
    return to_string(g->body) + (g->strict ? " < 0" : " <= 0");
  }
  if (const auto* l = f.as_linear()) return print_linear(*l);
  std::string out;
  if (const auto* a = f.as_and()) {
    for (const auto& c : a->children) {
      if (!out.empty()) out += " and ";
      out += print_formula_child(c, false);
    }
    return out;
  }
  const auto* o = f.as_or();
  for (const auto& c : o->children) {
    if (!out.empty()) out += " or ";
    out += print_formula_child(c, true);
  }
  return out;
}

std::string print_problem(const Problem& p) {
  std::ostringstream out;
  out << "exists";
  for (const auto& x : p.x_vars) out << ' ' << x;
  out << ";\nforall-vars";
  for (const auto& y : p.y_vars) out << ' ' << y;
  out << ";\n";
  for (const auto& br : p.branches) {
    out << "branch ";
    for (std::size_t i = 0; i < br.box.size(); ++i) {
      if (i) out << ", ";
      out << br.box.name(i) << " in ["
          << to_string(Expr::constant(br.box[i].lo())) << ", "
          << to_string(Expr::constant(br.box[i].hi())) << "]";
    }
    out << " : " << print_formula(br.formula) << ";\n";
  }
  for (Eigen::Index i = 0; i < p.eq_matrix.rows(); ++i) {
    std::string lhs;
    for (Eigen::Index j = 0; j < p.eq_matrix.cols(); ++j) {
      const double c = p.eq_matrix(i, j);
      if (c == 0.0) continue;
      if (!lhs.empty()) lhs += " + ";
      lhs += to_string(Expr::mul(Expr::constant(c),
                                 Expr::var(p.x_vars[static_cast<std::size_t>(j)])));
    }
    if (lhs.empty()) lhs = "0*" + p.x_vars.front();
    out << "eq " << lhs << " = " << to_string(Expr::constant(p.eq_rhs(i))) << ";\n";
  }
  return out.str();
}

}  // namespace efsolver
