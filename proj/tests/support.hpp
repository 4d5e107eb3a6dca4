#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "efsolver/expr.hpp"
#include "efsolver/interval.hpp"
#include "efsolver/parser.hpp"
#include "efsolver/relaxation.hpp"

namespace efsolver::testing {

inline std::filesystem::path problem_dir() { return EFSOLVER_PROBLEM_DIR; }
inline std::filesystem::path data_dir() { return EFSOLVER_TEST_DATA_DIR; }

inline Problem load_problem(const std::string& name) {
  return parse_problem_file(problem_dir() / (name + ".efp"));
}

inline Box make_box(std::vector<Box::Dim> dims) { return Box(std::move(dims)); }

// Interval with endpoints in [-range, range] and width at least min_width.
inline Interval random_interval(std::mt19937& rng, double range, double min_width) {
  std::uniform_real_distribution<double> centre(-range, range);
  std::uniform_real_distribution<double> extra(0.0, range);
  const double c = centre(rng);
  const double w = min_width + extra(rng);
  return Interval(c - 0.5 * w, c + 0.5 * w);
}

inline IntervalLinearSystem random_system(std::mt19937& rng, std::size_t rows,
                                          std::size_t vars, double min_width) {
  IntervalLinearSystem sys;
  sys.num_vars = vars;
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<Interval> p;
    for (std::size_t j = 0; j < vars; ++j) p.push_back(random_interval(rng, 2.0, min_width));
    sys.add_row(i + 1, std::move(p), random_interval(rng, 2.0, 0.0));
  }
  return sys;
}

// Pointwise truth of a formula at (x, y).
inline bool holds(const Formula& f, const std::vector<std::string>& x_names,
                  const std::vector<double>& x, const std::vector<std::string>& y_names,
                  const std::vector<double>& y) {
  if (f.is_true()) return true;
  if (f.is_false()) return false;
  if (const auto* g = f.as_guard()) {
    const double v = eval_at(g->body, y_names, y);
    return g->strict ? v < 0.0 : v <= 0.0;
  }
  if (const auto* lin = f.as_linear()) {
    double s = -eval_at(lin->rhs, y_names, y);
    for (std::size_t j = 0; j < x_names.size(); ++j) {
      if (const Expr* t = lin->coefficient(x_names[j])) s += x[j] * eval_at(*t, y_names, y);
    }
    return lin->strict ? s < 0.0 : s <= 0.0;
  }
  if (const auto* a = f.as_and()) {
    for (const auto& c : a->children) {
      if (!holds(c, x_names, x, y_names, y)) return false;
    }
    return true;
  }
  for (const auto& c : f.as_or()->children) {
    if (holds(c, x_names, x, y_names, y)) return true;
  }
  return false;
}

inline std::vector<double> sample_point(std::mt19937& rng, const Box& box) {
  std::vector<double> pt;
  for (std::size_t i = 0; i < box.size(); ++i) {
    pt.push_back(box[i].is_point()
                     ? box[i].lo()
                     : std::uniform_real_distribution<double>(box[i].lo(), box[i].hi())(rng));
  }
  return pt;
}

// max over the row of p . x with each p_j at its worst endpoint, minus q_lo.
inline double worst_case_violation(const IntervalLinearSystem::Row& row,
                                   const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    s += x[j] >= 0.0 ? row.p[j].hi() * x[j] : row.p[j].lo() * x[j];
  }
  return s - row.q.lo();
}

// Adds the exact rows x_j <= bound and -x_j <= bound.
inline void add_box_rows(IntervalLinearSystem& sys, double bound) {
  for (std::size_t j = 0; j < sys.num_vars; ++j) {
    for (double sgn : {1.0, -1.0}) {
      std::vector<Interval> p(sys.num_vars, Interval(0.0));
      p[j] = Interval(sgn);
      sys.add_row(1000 + sys.rows.size(), std::move(p), Interval(bound));
    }
  }
}

inline double max_violation(const IntervalLinearSystem& sys, const std::vector<double>& x) {
  double worst = -INFINITY;
  for (const auto& row : sys.rows) worst = std::max(worst, worst_case_violation(row, x));
  return worst;
}

// Smallest max-row violation over a grid on [-bound, bound]^r, followed by a
// few rounds of finer grids around the best point found so far.
inline double grid_min_violation(const IntervalLinearSystem& sys, double bound, double step,
                                 int zoom_rounds = 6) {
  const std::size_t r = sys.num_vars;
  std::vector<double> best_x(r, 0.0);
  double best = max_violation(sys, best_x);

  auto scan = [&](const std::vector<double>& centre, double half, double h) {
    const auto n = static_cast<long>(std::floor(2 * half / h + 1e-9)) + 1;
    std::vector<long> idx(r, 0);
    std::vector<double> x(r);
    while (true) {
      for (std::size_t j = 0; j < r; ++j) {
        x[j] = std::clamp(centre[j] - half + h * static_cast<double>(idx[j]), -bound, bound);
      }
      const double v = max_violation(sys, x);
      if (v < best) {
        best = v;
        best_x = x;
      }
      std::size_t k = 0;
      while (k < r && ++idx[k] == n) idx[k++] = 0;
      if (k == r) break;
    }
  };

  scan(std::vector<double>(r, 0.0), bound, step);
  double h = step;
  for (int round = 0; round < zoom_rounds; ++round) {
    const std::vector<double> centre = best_x;
    scan(centre, 2 * h, h / 4);
    h /= 4;
  }
  return best;
}

}  // namespace efsolver::testing
