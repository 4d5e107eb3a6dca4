#include "efsolver/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "efsolver/errors.hpp"

namespace efsolver {

void validate(const HeuristicConfig& cfg) {
  if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon)) {
    throw std::invalid_argument("epsilon must be a finite non-negative number");
  }
  if (!(cfg.aging_kappa >= 0.0) || !std::isfinite(cfg.aging_kappa)) {
    throw std::invalid_argument("kappa must be a finite non-negative number");
  }
}

std::size_t AgeTable::age(const Slot& slot, std::size_t variable) const {
  auto it = ages_.find({slot, variable});
  return it == ages_.end() ? 0 : it->second;
}

void AgeTable::record_split(const Slot& slot, std::size_t variable,
                            std::size_t num_vars) {
  for (std::size_t v = 0; v < num_vars; ++v) {
    if (v == variable) {
      ages_.erase({slot, v});
    } else {
      ++ages_[{slot, v}];
    }
  }
}

double coeff_score(const Interval& p, double x1j, double x2j, double epsilon) {
  return p.width() * (std::max(x1j, x2j) + epsilon);
}

Sign coefficient_sign(double x1j, double x2j) {
  return x1j - x2j >= 0.0 ? Sign::Plus : Sign::Minus;
}

namespace {

bool row_is_exact(const IntervalLinearSystem::Row& row) {
  if (row.q.width() > 0.0) return false;
  return std::all_of(row.p.begin(), row.p.end(),
                     [](const Interval& p) { return p.width() == 0.0; });
}

// Row indices sorted by decreasing residual; near-equal residuals count as
// tied and are ordered by branch id.
std::vector<std::size_t> rows_by_residual(const IntervalLinearSystem& sys,
                                          const Eigen::VectorXd& d) {
  std::vector<std::size_t> order(sys.rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const double dmax = d.size() > 0 ? d.maxCoeff() : 0.0;
  const double tie = 1e-9 * std::max(1.0, std::fabs(dmax));
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = d(static_cast<Eigen::Index>(a));
    const double db = d(static_cast<Eigen::Index>(b));
    if (std::fabs(da - db) > tie) return da > db;
    return sys.rows[a].branch < sys.rows[b].branch;
  });
  return order;
}

}  // namespace

SplitTarget target_for_row(const IntervalLinearSystem& sys,
                           const LPSolution& sol, std::size_t row,
                           const HeuristicConfig& cfg) {
  const auto& r = sys.rows.at(row);
  SplitTarget target;
  target.branch = r.branch;
  target.row = row;
  if (cfg.strategy == Strategy::RoundRobin || row_is_exact(r)) return target;

  std::size_t best = 0;
  double best_score = -1.0;
  for (std::size_t j = 0; j < r.p.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double h = coeff_score(r.p[j], sol.x1(jj), sol.x2(jj), cfg.epsilon);
    if (h > best_score) {
      best_score = h;
      best = j;
    }
  }
  if (!r.p.empty()) {
    const auto jj = static_cast<Eigen::Index>(best);
    target.slot = Slot{Slot::Kind::Coefficient, best};
    target.sign = coefficient_sign(sol.x1(jj), sol.x2(jj));
  }
  // Raising the lower end of q relaxes the row by up to width(q).
  if (r.q.width() > best_score) {
    target.slot = Slot{Slot::Kind::Rhs, 0};
    target.sign = Sign::Minus;
  }
  return target;
}

std::vector<SplitTarget> select_targets(const IntervalLinearSystem& sys,
                                        const FeasibilityLP& lp,
                                        const LPSolution& sol,
                                        const Eigen::VectorXd& d,
                                        const HeuristicConfig& cfg) {
  if (sol.status == LPStatus::Unbounded || sol.rho <= 0.0) {
    throw NoPositiveResidual("the relaxation is already solvable");
  }
  if (static_cast<std::size_t>(d.size()) != sys.rows.size() ||
      lp.num_rows() != sys.rows.size()) {
    throw std::invalid_argument("residual does not match the system");
  }
  const auto order = rows_by_residual(sys, d);
  auto residual = [&](std::size_t i) { return d(static_cast<Eigen::Index>(i)); };

  std::vector<SplitTarget> out;
  if (cfg.strategy == Strategy::SplitAll) {
    for (std::size_t i : order) {
      if (residual(i) <= 0.0) break;
      if (row_is_exact(sys.rows[i])) continue;
      out.push_back(target_for_row(sys, sol, i, cfg));
    }
    if (out.empty()) out.push_back(target_for_row(sys, sol, order.front(), cfg));
    std::sort(out.begin(), out.end(), [](const SplitTarget& a, const SplitTarget& b) {
      return a.branch < b.branch;
    });
    return out;
  }

  std::size_t pick = order.front();
  if (cfg.strategy == Strategy::SplitWorst) {
    for (std::size_t i : order) {
      if (residual(i) <= 0.0) break;
      if (!row_is_exact(sys.rows[i])) {
        pick = i;
        break;
      }
    }
  }
  out.push_back(target_for_row(sys, sol, pick, cfg));
  return out;
}

std::size_t splitheur(const Expr& t, const Box& box, Sign sign,
                      const std::function<std::size_t(std::size_t)>& age,
                      double kappa, ChildAggregate aggregate) {
  auto bound = [sign](const Interval& iv) { return sign == Sign::Plus ? iv.hi() : iv.lo(); };

  std::optional<Interval> whole;
  try {
    whole = eval_on_box(t, box);
  } catch (const DomainError&) {
    // No usable enclosure to compare against.
    return widest_var(box);
  }
  const double w = whole->width();
  const double b0 = bound(*whole);

  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (!splittable(box, i)) continue;
    const auto [left, right] = split_box(box, i);
    double improvement = 0.0;
    try {
      const double a = std::fabs(b0 - bound(eval_on_box(t, left)));
      const double b = std::fabs(b0 - bound(eval_on_box(t, right)));
      improvement = aggregate == ChildAggregate::Max ? std::max(a, b) : std::min(a, b);
    } catch (const DomainError&) {
      improvement = 0.0;
    }
    const double score = kappa * w * static_cast<double>(age(i)) + improvement;
    if (!best || score > best_score) {
      best = i;
      best_score = score;
    }
  }
  if (!best) throw AllDimensionsDegenerate("no box dimension can be split");
  return *best;
}

std::size_t round_robin_var(const Box& box, std::size_t counter) {
  const std::size_t s = box.size();
  for (std::size_t k = 0; k < s; ++k) {
    const std::size_t i = (counter + k) % s;
    if (splittable(box, i)) return i;
  }
  throw AllDimensionsDegenerate("no box dimension can be split");
}

std::size_t widest_var(const Box& box) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (!splittable(box, i)) continue;
    if (!best || box[i].width() > box[*best].width()) best = i;
  }
  if (!best) throw AllDimensionsDegenerate("no box dimension can be split");
  return *best;
}

}  // namespace efsolver
