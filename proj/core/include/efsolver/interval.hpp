#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace efsolver {

// Closed interval [lo, hi] with finite endpoints.
//
// Arithmetic is outward rounded: each endpoint is computed in double
// precision and moved one ulp outwards whenever the operation was inexact.
// For +, -, * and / the exactness test uses error-free transformations, so
// exact results (e.g. products of small integers) stay tight. sin/cos are
// always inflated by one ulp on each side.
class Interval {
 public:
  Interval() = default;
  // Throws std::invalid_argument unless lo <= hi and both are finite.
  Interval(double lo, double hi);
  explicit Interval(double point) : Interval(point, point) {}

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }
  double midpoint() const;
  double radius() const { return 0.5 * width(); }
  double magnitude() const;

  bool contains(double value) const { return lo_ <= value && value <= hi_; }
  bool contains(const Interval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  bool is_point() const { return lo_ == hi_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

enum class ArithOp { Neg, Add, Sub, Mul, Div, Pow, Sin, Cos };

Interval operator-(const Interval& a);
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
// Throws DomainError if b contains zero.
Interval operator/(const Interval& a, const Interval& b);
// exponent >= 1. Monotone-piecewise, so pow(x, 2) of [-1,1] is [0,1].
Interval pow(const Interval& a, int exponent);
Interval sin(const Interval& a);
Interval cos(const Interval& a);

// Generic dispatcher. `b` is required for binary operators and ignored
// otherwise; `exponent` is only read by Pow.
Interval iv_arith(ArithOp op, const Interval& a,
                  const std::optional<Interval>& b = std::nullopt,
                  int exponent = 1);

// Smallest interval containing both.
Interval hull(const Interval& a, const Interval& b);

std::string to_string(const Interval& iv);

// Cartesian product of named closed intervals.
class Box {
 public:
  using Dim = std::pair<std::string, Interval>;

  Box() = default;
  // Throws std::invalid_argument on duplicate names.
  explicit Box(std::vector<Dim> dims);

  std::size_t size() const { return dims_.size(); }
  bool empty() const { return dims_.empty(); }

  const std::string& name(std::size_t i) const { return dims_.at(i).first; }
  const Interval& operator[](std::size_t i) const { return dims_.at(i).second; }
  const std::vector<Dim>& dims() const { return dims_; }

  std::optional<std::size_t> index_of(const std::string& name) const;
  // nullptr when the variable is not part of the box.
  const Interval* find(const std::string& name) const;

  Box with(std::size_t i, const Interval& iv) const;
  std::vector<double> midpoint() const;
  bool contains(const Box& other) const;
  bool contains(const std::vector<double>& point) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Dim> dims_;
};

// Splits dimension i at `at` (default: midpoint). The two children share the
// split face. Throws SplitDegenerate when dimension i has zero width or its
// midpoint is not representable strictly inside; std::invalid_argument when
// an explicit `at` is not strictly inside.
std::pair<Box, Box> split_box(const Box& box, std::size_t i,
                              std::optional<double> at = std::nullopt);

// True if dimension i can be bisected (its midpoint lies strictly inside).
bool splittable(const Box& box, std::size_t i);

std::string to_string(const Box& box);

}  // namespace efsolver
