#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "efsolver/errors.hpp"
#include "efsolver/expr.hpp"
#include "efsolver/interval.hpp"
#include "efsolver/parser.hpp"
#include "support.hpp"

using namespace efsolver;
using efsolver::testing::make_box;

namespace {

Expr y(const char* name) { return Expr::var(name); }

// The coefficient and right-hand-side expressions of every bundled
// benchmark, with the box of each of its branches.
std::vector<std::pair<Expr, Box>> benchmark_terms() {
  std::vector<std::pair<Expr, Box>> out;
  for (const char* name : {"A", "B", "C", "D"}) {
    const Problem p = efsolver::testing::load_problem(name);
    for (const auto& b : p.branches) {
      const LinearAtom* lin = find_linear(b.formula);
      for (const auto& [x, t] : lin->coeffs) out.emplace_back(t, b.box);
      out.emplace_back(lin->rhs, b.box);
    }
  }
  return out;
}

double eval_point(const Expr& e, const Box& box, const std::vector<double>& pt) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < box.size(); ++i) names.push_back(box.name(i));
  return eval_at(e, names, pt);
}

std::vector<double> sample(std::mt19937& rng, const Box& box) {
  std::vector<double> pt;
  for (std::size_t i = 0; i < box.size(); ++i) {
    std::uniform_real_distribution<double> u(box[i].lo(), box[i].hi());
    pt.push_back(box[i].is_point() ? box[i].lo() : u(rng));
  }
  return pt;
}

}  // namespace

TEST(Interval, RejectsReversedAndNonFinite) {
  EXPECT_THROW(Interval(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(Interval(0.0, std::numeric_limits<double>::infinity()), std::invalid_argument);
  EXPECT_THROW(Interval(std::nan(""), 1.0), std::invalid_argument);
}

TEST(Interval, MulOfStraddlingIntervals) {
  EXPECT_EQ(iv_arith(ArithOp::Mul, Interval(-1, 3), Interval(-3, 1)), Interval(-9, 3));
}

TEST(Interval, SinOverHalfPeriod) {
  const Interval r = iv_arith(ArithOp::Sin, Interval(0.0, std::numbers::pi));
  EXPECT_TRUE(r.contains(Interval(0.0, 1.0)));
  EXPECT_NEAR(r.lo(), 0.0, 1e-15);
  EXPECT_NEAR(r.hi(), 1.0, 1e-15);
}

TEST(Interval, EvenPowerOfSymmetricInterval) {
  EXPECT_EQ(iv_arith(ArithOp::Pow, Interval(-1, 1), std::nullopt, 2), Interval(0, 1));
}

TEST(Interval, ExactOperationsStayTight) {
  EXPECT_EQ(Interval(1, 2) + Interval(3, 4), Interval(4, 6));
  EXPECT_EQ(Interval(1, 2) - Interval(3, 4), Interval(-3, -1));
  EXPECT_EQ(Interval(2, 4) / Interval(2, 2), Interval(1, 2));
  EXPECT_EQ(pow(Interval(-2, 1), 3), Interval(-8, 1));
}

TEST(Interval, InexactOperationsRoundOutward) {
  const Interval third = Interval(1.0) / Interval(3.0);
  EXPECT_LT(third.lo(), third.hi());
  EXPECT_LE(third.lo() * 3.0, 1.0);
  const Interval tenth = Interval(0.1) + Interval(0.2);
  EXPECT_TRUE(tenth.contains(0.1 + 0.2));
  EXPECT_LT(tenth.lo(), tenth.hi());
}

TEST(Interval, DivisionByZeroContainingInterval) {
  EXPECT_THROW(Interval(1, 2) / Interval(-1, 1), DomainError);
  EXPECT_THROW(Interval(1, 2) / Interval(0, 1), DomainError);
}

TEST(Interval, CosOverFullPeriodIsUnitRange) {
  const Interval r = cos(Interval(-1.0, 7.0));
  EXPECT_EQ(r, Interval(-1.0, 1.0));
}

TEST(EvalOnBox, ProductRange) {
  const Box b = make_box({{"y1", Interval(0, 1)}, {"y2", Interval(-1, 1)}});
  EXPECT_EQ(eval_on_box(y("y1") * y("y2"), b), Interval(-1, 1));
}

TEST(EvalOnBox, PointBox) {
  const Box b = make_box({{"y", Interval(0, 0)}});
  EXPECT_EQ(eval_on_box(Expr::pow(y("y"), 2) + y("y"), b), Interval(0, 0));
}

TEST(EvalOnBox, ExampleACoefficientContainsSampledRange) {
  const Expr t = Expr::constant(2) * Expr::pow(y("y1"), 3) * y("y2") -
                 Expr::constant(2) * Expr::pow(y("y1"), 2) + y("y1");
  const Box b = make_box({{"y1", Interval(0.8, 1.2)}, {"y2", Interval(0.3, 0.49)}});
  const Interval enc = eval_on_box(t, b);
  // Dense grid for the true range.
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) {
      const double y1 = 0.8 + 0.4 * i / 400.0;
      const double y2 = 0.3 + 0.19 * j / 400.0;
      const double v = 2 * y1 * y1 * y1 * y2 - 2 * y1 * y1 + y1;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  EXPECT_LE(enc.lo(), lo);
  EXPECT_GE(enc.hi(), hi);
}

TEST(EvalOnBox, MissingVariableIsRejected) {
  const Box b = make_box({{"y1", Interval(0, 1)}});
  EXPECT_THROW(eval_on_box(y("y2"), b), std::invalid_argument);
}

TEST(EvalOnBox, ContainmentOnBenchmarkTerms) {
  std::mt19937 rng(7);
  for (const auto& [t, box] : benchmark_terms()) {
    const Interval enc = eval_on_box(t, box);
    for (int k = 0; k < 2000; ++k) {
      const double v = eval_point(t, box, sample(rng, box));
      ASSERT_TRUE(enc.contains(v)) << to_string(t) << " on " << to_string(box) << " gave " << v
                                   << " outside " << to_string(enc);
    }
  }
}

TEST(EvalOnBox, ContainmentForTrigonometricAndRational) {
  std::mt19937 rng(11);
  const Expr t = Expr::sin(y("a") * y("b")) + Expr::cos(y("a")) / (y("b") + Expr::constant(3)) -
                 Expr::pow(y("a") - y("b"), 5);
  for (int trial = 0; trial < 50; ++trial) {
    const Box box = make_box({{"a", efsolver::testing::random_interval(rng, 4.0, 0.0)},
                              {"b", Interval(-1.5, 1.5)}});
    const Interval enc = eval_on_box(t, box);
    for (int k = 0; k < 200; ++k) {
      ASSERT_TRUE(enc.contains(eval_point(t, box, sample(rng, box))));
    }
  }
}

TEST(EvalOnBox, InclusionMonotone) {
  std::mt19937 rng(3);
  for (const auto& [t, box] : benchmark_terms()) {
    const Interval whole = eval_on_box(t, box);
    for (std::size_t i = 0; i < box.size(); ++i) {
      const auto [l, r] = split_box(box, i);
      EXPECT_TRUE(whole.contains(eval_on_box(t, l)));
      EXPECT_TRUE(whole.contains(eval_on_box(t, r)));
    }
  }
}

TEST(EvalOnBox, WidthShrinksUnderRepeatedBisection) {
  for (const auto& [t, box] : benchmark_terms()) {
    const double w0 = eval_on_box(t, box).width();
    if (w0 == 0.0) continue;
    Box b = box;
    for (int step = 0; step < 20; ++step) {
      for (std::size_t i = 0; i < b.size(); ++i) b = split_box(b, i).first;
    }
    EXPECT_LT(eval_on_box(t, b).width(), 1e-3 * w0) << to_string(t);
  }
}

TEST(SplitBox, UnitInterval) {
  const auto [l, r] = split_box(make_box({{"y", Interval(0, 1)}}), 0);
  EXPECT_EQ(l, make_box({{"y", Interval(0, 0.5)}}));
  EXPECT_EQ(r, make_box({{"y", Interval(0.5, 1)}}));
}

TEST(SplitBox, SecondDimension) {
  const Box b = make_box({{"y1", Interval(0, 1)}, {"y2", Interval(-1, 1)}});
  const auto [l, r] = split_box(b, 1);
  EXPECT_EQ(l[1], Interval(-1, 0));
  EXPECT_EQ(r[1], Interval(0, 1));
  EXPECT_EQ(l[0], b[0]);
  EXPECT_EQ(r[0], b[0]);
}

TEST(SplitBox, ZeroWidthIsDegenerate) {
  EXPECT_THROW(split_box(make_box({{"y", Interval(2, 2)}}), 0), SplitDegenerate);
  EXPECT_FALSE(splittable(make_box({{"y", Interval(2, 2)}}), 0));
}

TEST(SplitBox, ExplicitPointMustBeInterior) {
  const Box b = make_box({{"y", Interval(0, 1)}});
  EXPECT_THROW(split_box(b, 0, 1.0), std::invalid_argument);
  const auto [l, r] = split_box(b, 0, 0.25);
  EXPECT_EQ(l[0], Interval(0, 0.25));
  EXPECT_EQ(r[0], Interval(0.25, 1));
}

TEST(SplitBox, ChildrenHalveAndCover) {
  std::mt19937 rng(5);
  for (int k = 0; k < 200; ++k) {
    const Box b = make_box({{"u", efsolver::testing::random_interval(rng, 10.0, 1e-6)},
                            {"v", efsolver::testing::random_interval(rng, 10.0, 1e-6)}});
    for (std::size_t i = 0; i < 2; ++i) {
      const auto [l, r] = split_box(b, i);
      EXPECT_TRUE(b.contains(l));
      EXPECT_TRUE(b.contains(r));
      EXPECT_EQ(l[i].lo(), b[i].lo());
      EXPECT_EQ(r[i].hi(), b[i].hi());
      EXPECT_EQ(l[i].hi(), r[i].lo());
      EXPECT_NEAR(l[i].width(), 0.5 * b[i].width(), 1e-12 * b[i].width());
      EXPECT_NEAR(r[i].width(), 0.5 * b[i].width(), 1e-12 * b[i].width());
    }
  }
}

TEST(Box, RejectsDuplicateNames) {
  EXPECT_THROW(make_box({{"y", Interval(0, 1)}, {"y", Interval(0, 1)}}), std::invalid_argument);
}
