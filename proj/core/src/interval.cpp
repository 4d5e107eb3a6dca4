#include "efsolver/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "efsolver/errors.hpp"

namespace efsolver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this magnitude the fma error term may itself be inexact.
constexpr double kTiny = 1e-290;

double next_down(double v) { return std::nextafter(v, -kInf); }
double next_up(double v) { return std::nextafter(v, kInf); }

// Error-free TwoSum: returns the rounding error of s = a + b.
double sum_error(double a, double b, double s) {
  const double bb = s - a;
  return (a - (s - bb)) + (b - bb);
}

double add_down(double a, double b) {
  const double s = a + b;
  return sum_error(a, b, s) < 0.0 ? next_down(s) : s;
}

double add_up(double a, double b) {
  const double s = a + b;
  return sum_error(a, b, s) > 0.0 ? next_up(s) : s;
}

double mul_down(double a, double b) {
  const double p = a * b;
  if (p != 0.0 && std::fabs(p) < kTiny) return next_down(p);
  if (p == 0.0 && a != 0.0 && b != 0.0) return next_down(p);
  return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
  const double p = a * b;
  if (p != 0.0 && std::fabs(p) < kTiny) return next_up(p);
  if (p == 0.0 && a != 0.0 && b != 0.0) return next_up(p);
  return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

// Sign of (a / b - q) where q = fl(a / b).
int div_error_sign(double a, double b, double q) {
  const double r = std::fma(-q, b, a);
  if (r == 0.0) return 0;
  return ((r > 0.0) == (b > 0.0)) ? 1 : -1;
}

double div_down(double a, double b) {
  const double q = a / b;
  if (q != 0.0 && std::fabs(q) < kTiny) return next_down(q);
  if (q == 0.0 && a != 0.0) return next_down(q);
  return div_error_sign(a, b, q) < 0 ? next_down(q) : q;
}

double div_up(double a, double b) {
  const double q = a / b;
  if (q != 0.0 && std::fabs(q) < kTiny) return next_up(q);
  if (q == 0.0 && a != 0.0) return next_up(q);
  return div_error_sign(a, b, q) > 0 ? next_up(q) : q;
}

// base >= 0.
double pow_down(double base, int exponent) {
  double acc = 1.0;
  for (int i = 0; i < exponent; ++i) acc = mul_down(acc, base);
  return std::max(acc, 0.0);
}

double pow_up(double base, int exponent) {
  double acc = 1.0;
  for (int i = 0; i < exponent; ++i) acc = mul_up(acc, base);
  return acc;
}

// Does [lo, hi] contain offset + 2*pi*k for some integer k? Errs towards
// "yes" near the boundary, which only widens the result.
bool contains_periodic_point(double lo, double hi, double offset) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double slack = 1e-12 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
  const double k = std::ceil((lo - slack - offset) / kTwoPi);
  const double point = offset + k * kTwoPi;
  return point <= hi + slack;
}

Interval periodic_range(const Interval& a, double (*fn)(double),
                        double max_offset, double min_offset) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (a.width() >= kTwoPi) return Interval(-1.0, 1.0);
  const double f_lo = fn(a.lo());
  const double f_hi = fn(a.hi());
  double lo = next_down(std::min(f_lo, f_hi));
  double hi = next_up(std::max(f_lo, f_hi));
  if (contains_periodic_point(a.lo(), a.hi(), max_offset)) hi = 1.0;
  if (contains_periodic_point(a.lo(), a.hi(), min_offset)) lo = -1.0;
  return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

double sin_fn(double v) { return std::sin(v); }
double cos_fn(double v) { return std::cos(v); }

}  // namespace

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("interval endpoints must be finite");
  }
  if (lo > hi) {
    throw std::invalid_argument("interval lower endpoint exceeds upper");
  }
}

double Interval::midpoint() const {
  const double m = 0.5 * lo_ + 0.5 * hi_;
  return std::clamp(m, lo_, hi_);
}

double Interval::magnitude() const {
  return std::max(std::fabs(lo_), std::fabs(hi_));
}

Interval operator-(const Interval& a) { return Interval(-a.hi(), -a.lo()); }

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi()));
}

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(add_down(a.lo(), -b.hi()), add_up(a.hi(), -b.lo()));
}

Interval operator*(const Interval& a, const Interval& b) {
  const double ends[4][2] = {{a.lo(), b.lo()},
                             {a.lo(), b.hi()},
                             {a.hi(), b.lo()},
                             {a.hi(), b.hi()}};
  double lo = kInf;
  double hi = -kInf;
  for (const auto& e : ends) {
    lo = std::min(lo, mul_down(e[0], e[1]));
    hi = std::max(hi, mul_up(e[0], e[1]));
  }
  return Interval(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) {
    throw DomainError("division by an interval containing zero: " +
                      to_string(b));
  }
  const double ends[4][2] = {{a.lo(), b.lo()},
                             {a.lo(), b.hi()},
                             {a.hi(), b.lo()},
                             {a.hi(), b.hi()}};
  double lo = kInf;
  double hi = -kInf;
  for (const auto& e : ends) {
    lo = std::min(lo, div_down(e[0], e[1]));
    hi = std::max(hi, div_up(e[0], e[1]));
  }
  return Interval(lo, hi);
}

Interval pow(const Interval& a, int exponent) {
  if (exponent < 1) {
    throw DomainError("power exponent must be a positive integer");
  }
  if (exponent == 1) return a;
  const bool odd = exponent % 2 == 1;
  if (odd) {
    // Monotone increasing: x^n = sign(x) |x|^n.
    const double lo = a.lo() >= 0.0 ? pow_down(a.lo(), exponent)
                                    : -pow_up(-a.lo(), exponent);
    const double hi = a.hi() >= 0.0 ? pow_up(a.hi(), exponent)
                                    : -pow_down(-a.hi(), exponent);
    return Interval(lo, hi);
  }
  if (a.lo() >= 0.0) {
    return Interval(pow_down(a.lo(), exponent), pow_up(a.hi(), exponent));
  }
  if (a.hi() <= 0.0) {
    return Interval(pow_down(-a.hi(), exponent), pow_up(-a.lo(), exponent));
  }
  return Interval(0.0, pow_up(a.magnitude(), exponent));
}

Interval sin(const Interval& a) {
  return periodic_range(a, sin_fn, 0.5 * std::numbers::pi,
                        -0.5 * std::numbers::pi);
}

Interval cos(const Interval& a) {
  return periodic_range(a, cos_fn, 0.0, std::numbers::pi);
}

Interval iv_arith(ArithOp op, const Interval& a,
                  const std::optional<Interval>& b, int exponent) {
  auto rhs = [&]() -> const Interval& {
    if (!b) throw std::invalid_argument("binary interval operator needs two operands");
    return *b;
  };
  switch (op) {
    case ArithOp::Neg: return -a;
    case ArithOp::Add: return a + rhs();
    case ArithOp::Sub: return a - rhs();
    case ArithOp::Mul: return a * rhs();
    case ArithOp::Div: return a / rhs();
    case ArithOp::Pow: return pow(a, exponent);
    case ArithOp::Sin: return sin(a);
    case ArithOp::Cos: return cos(a);
  }
  throw std::logic_error("unknown interval operator");
}

Interval hull(const Interval& a, const Interval& b) {
  return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

std::string to_string(const Interval& iv) {
  std::ostringstream out;
  out.precision(17);
  out << '[' << iv.lo() << ", " << iv.hi() << ']';
  return out.str();
}

Box::Box(std::vector<Dim> dims) : dims_(std::move(dims)) {
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    for (std::size_t j = i + 1; j < dims_.size(); ++j) {
      if (dims_[i].first == dims_[j].first) {
        throw std::invalid_argument("duplicate box variable '" +
                                    dims_[i].first + "'");
      }
    }
  }
}

std::optional<std::size_t> Box::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i].first == name) return i;
  }
  return std::nullopt;
}

const Interval* Box::find(const std::string& name) const {
  for (const auto& [n, iv] : dims_) {
    if (n == name) return &iv;
  }
  return nullptr;
}

Box Box::with(std::size_t i, const Interval& iv) const {
  Box out = *this;
  out.dims_.at(i).second = iv;
  return out;
}

std::vector<double> Box::midpoint() const {
  std::vector<double> m;
  m.reserve(dims_.size());
  for (const auto& d : dims_) m.push_back(d.second.midpoint());
  return m;
}

bool Box::contains(const Box& other) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (name(i) != other.name(i) || !(*this)[i].contains(other[i])) {
      return false;
    }
  }
  return true;
}

bool Box::contains(const std::vector<double>& point) const {
  if (point.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(*this)[i].contains(point[i])) return false;
  }
  return true;
}

bool splittable(const Box& box, std::size_t i) {
  const Interval& iv = box[i];
  const double m = iv.midpoint();
  return iv.lo() < m && m < iv.hi();
}

std::pair<Box, Box> split_box(const Box& box, std::size_t i,
                              std::optional<double> at) {
  const Interval& iv = box[i];
  if (iv.width() == 0.0) {
    throw SplitDegenerate("cannot split zero-width dimension '" +
                          box.name(i) + "'");
  }
  double cut;
  if (at) {
    if (!(iv.lo() < *at && *at < iv.hi())) {
      throw std::invalid_argument("split point must lie strictly inside " +
                                  to_string(iv));
    }
    cut = *at;
  } else {
    if (!splittable(box, i)) {
      throw SplitDegenerate("dimension '" + box.name(i) +
                            "' is too narrow to bisect");
    }
    cut = iv.midpoint();
  }
  return {box.with(i, Interval(iv.lo(), cut)),
          box.with(i, Interval(cut, iv.hi()))};
}

std::string to_string(const Box& box) {
  std::string out;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (i) out += ", ";
    out += box.name(i) + " in " + to_string(box[i]);
  }
  return out;
}

}  // namespace efsolver
