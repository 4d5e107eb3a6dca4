#include "efsolver/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "efsolver/errors.hpp"
#include "efsolver/simplifier.hpp"

namespace efsolver {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::RoundRobin: return "round-robin";
    case Strategy::SplitWorst: return "split-worst";
    case Strategy::SplitAll: return "split-all";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(const std::string& name) {
  if (name == "round-robin") return Strategy::RoundRobin;
  if (name == "split-worst") return Strategy::SplitWorst;
  if (name == "split-all") return Strategy::SplitAll;
  return std::nullopt;
}

namespace {

// rho must be at least this far below zero before a relaxation is accepted.
constexpr double kAcceptMargin = 1e-9;

struct LiveBranch {
  BranchId id = 0;
  std::size_t source = 0;
  Box box;
  AgeTable ages;
  std::size_t counter = 0;  // round-robin position of this lineage
  std::optional<BranchStatus> status;
};

class Engine {
 public:
  Engine(const Problem& p, const SolveConfig& cfg)
      : p_(p), cfg_(cfg), start_(std::chrono::steady_clock::now()) {
    for (std::size_t i = 0; i < p.branches.size(); ++i) {
      live_.push_back(LiveBranch{next_id_++, i, p.branches[i].box, {}, 0, std::nullopt});
    }
  }

  SolveOutcome run() {
    SolveOutcome out;
    out.result = loop();
    out.stats = stats_;
    out.stats.wall_time_ms = elapsed_ms();
    return out;
  }

 private:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  bool out_of_time() const {
    return cfg_.time_budget > 0.0 && elapsed_ms() > cfg_.time_budget * 1000.0;
  }

  std::variant<Solution, Infeasible, BudgetExhausted> loop() {
    while (true) {
      ++stats_.iterations;
      if (out_of_time()) return BudgetExhausted{"time budget exceeded"};
      if (cfg_.max_live_boxes > 0 && live_.size() > cfg_.max_live_boxes) {
        return BudgetExhausted{"too many live boxes"};
      }

      // Steps 1-3: classify, stop on a false branch, drop true ones.
      std::vector<LiveBranch> kept;
      kept.reserve(live_.size());
      for (auto& b : live_) {
        if (!b.status) b.status = simplify_branch(p_.branches[b.source].formula, b.box, p_.x_vars);
        if (std::holds_alternative<ProvedFalse>(*b.status)) {
          return Infeasible{b.source, b.box,
                            "branch " + std::to_string(b.source + 1) + " is false on " +
                                to_string(b.box)};
        }
        if (!std::holds_alternative<ProvedTrue>(*b.status)) kept.push_back(std::move(b));
      }
      live_ = std::move(kept);

      if (auto undecided = pick_undecided()) {
        if (stats_.splits >= cfg_.max_splits) return BudgetExhausted{"split limit reached"};
        try {
          split(*undecided, undecided_target(*undecided));
        } catch (const AllDimensionsDegenerate&) {
          return BudgetExhausted{"undecided branch cannot be split further"};
        }
        continue;
      }

      if (out_of_time()) return BudgetExhausted{"time budget exceeded"};

      // All live branches are linear rows.
      IntervalLinearSystem sys;
      sys.num_vars = p_.num_x();
      for (const auto& b : live_) {
        const auto& row = std::get<LinearRow>(*b.status);
        sys.add_row(b.id, row.p, row.q);
      }
      const FeasibilityLP lp = rohn_transform(sys, p_.eq_matrix, p_.eq_rhs);
      LPSolution sol;
      try {
        sol = solve_feasibility(lp);
      } catch (const EqualitiesInfeasible& e) {
        return Infeasible{std::nullopt, std::nullopt, e.what()};
      }
      ++stats_.lp_solves;
      const Eigen::VectorXd d = residual_vector(lp, sol);

      if (sol.status == LPStatus::Unbounded || sol.rho <= -kAcceptMargin) {
        Solution s;
        s.x = sol.x();
        s.rho = sol.rho;
        for (std::size_t i = 0; i < live_.size(); ++i) {
          s.certificate.push_back(BranchCertificate{live_[i].id, live_[i].source, live_[i].box,
                                                    d(static_cast<Eigen::Index>(i))});
        }
        return s;
      }

      std::vector<SplitTarget> targets;
      if (sol.rho > 0.0) {
        targets = select_targets(sys, lp, sol, d, cfg_.heuristic);
      } else {
        // Marginal: too close to zero to trust, refine the worst row.
        Eigen::Index worst = 0;
        d.maxCoeff(&worst);
        targets.push_back(target_for_row(sys, sol, static_cast<std::size_t>(worst), cfg_.heuristic));
      }

      if (stats_.splits >= cfg_.max_splits) return BudgetExhausted{"split limit reached"};

      // Row index equals position in live_, which the splits below rewrite.
      std::vector<std::pair<std::size_t, SplitTarget>> jobs;
      for (const auto& t : targets) jobs.emplace_back(t.row, t);
      try {
        for (auto& [row, t] : jobs) t.variable = choose_variable(live_[row], t);
      } catch (const AllDimensionsDegenerate&) {
        return BudgetExhausted{"selected box cannot be split further"};
      }
      if (cfg_.on_iteration) {
        IterationInfo info;
        info.iteration = stats_.iterations;
        info.splits = stats_.splits;
        info.live_branches = live_.size();
        info.rho = sol.rho;
        for (const auto& [row, t] : jobs) info.targets.push_back(t);
        cfg_.on_iteration(info);
      }
      apply_splits(jobs);
    }
  }

  // Index into live_ of the undecided branch with the widest straddling guard.
  std::optional<std::size_t> pick_undecided() const {
    std::optional<std::size_t> best;
    double best_width = -1.0;
    for (std::size_t i = 0; i < live_.size(); ++i) {
      const auto* u = std::get_if<Undecided>(&*live_[i].status);
      if (!u) continue;
      const double w = widest_guard(*u, live_[i].box).second;
      if (w > best_width) {
        best_width = w;
        best = i;
      }
    }
    return best;
  }

  // Undecided guard of the residual formula with the widest enclosure.
  static std::pair<const GuardAtom*, double> widest_guard(const Undecided& u, const Box& box) {
    const GuardAtom* best = nullptr;
    double width = 0.0;
    for (const GuardAtom* g : guards(u.residual)) {
      Interval iv;
      try {
        iv = eval_on_box(g->body, box);
      } catch (const DomainError&) {
        continue;
      }
      if (classify_guard_interval(*g, iv) != Truth::Undecided) continue;
      if (!best || iv.width() > width) {
        best = g;
        width = iv.width();
      }
    }
    return {best, width};
  }

  SplitTarget undecided_target(std::size_t index) {
    const auto& b = live_[index];
    SplitTarget t;
    t.branch = b.id;
    t.row = index;
    const auto [guard, width] = widest_guard(std::get<Undecided>(*b.status), b.box);
    if (guard) {
      const auto all = guards(p_.branches[b.source].formula);
      for (std::size_t k = 0; k < all.size(); ++k) {
        if (*all[k] == *guard) {
          t.slot = Slot{Slot::Kind::Guard, k};
          break;
        }
      }
      const Interval iv = eval_on_box(guard->body, b.box);
      t.sign = std::fabs(iv.hi()) < std::fabs(iv.lo()) ? Sign::Plus : Sign::Minus;
    }
    t.variable = choose_variable(b, t);
    return t;
  }

  const Expr& slot_expr(const LiveBranch& b, const Slot& slot) const {
    static const Expr zero;
    const Formula& f = p_.branches[b.source].formula;
    switch (slot.kind) {
      case Slot::Kind::Coefficient: {
        const LinearAtom* lin = find_linear(f);
        const Expr* e = lin ? lin->coefficient(p_.x_vars.at(slot.index)) : nullptr;
        return e ? *e : zero;
      }
      case Slot::Kind::Rhs: {
        const LinearAtom* lin = find_linear(f);
        return lin ? lin->rhs : zero;
      }
      case Slot::Kind::Guard:
        return guards(f).at(slot.index)->body;
    }
    return zero;
  }

  std::size_t choose_variable(const LiveBranch& b, const SplitTarget& t) const {
    if (cfg_.heuristic.strategy == Strategy::RoundRobin) return round_robin_var(b.box, b.counter);
    if (!t.slot) return widest_var(b.box);
    const Slot slot = *t.slot;
    return splitheur(
        slot_expr(b, slot), b.box, t.sign,
        [&](std::size_t v) { return b.ages.age(slot, v); }, cfg_.heuristic.aging_kappa,
        cfg_.heuristic.aggregate);
  }

  void split(std::size_t index, const SplitTarget& t) {
    apply_splits({{index, t}});
  }

  void apply_splits(const std::vector<std::pair<std::size_t, SplitTarget>>& jobs) {
    std::vector<bool> retired(live_.size(), false);
    std::vector<LiveBranch> children;
    for (const auto& [index, t] : jobs) {
      const LiveBranch& parent = live_[index];
      auto [left, right] = split_box(parent.box, t.variable);
      AgeTable ages = parent.ages;
      if (t.slot) ages.record_split(*t.slot, t.variable, parent.box.size());
      for (Box* child : {&left, &right}) {
        children.push_back(
            LiveBranch{next_id_++, parent.source, std::move(*child), ages, parent.counter + 1, std::nullopt});
      }
      retired[index] = true;
      ++stats_.boxes_split;
    }
    ++stats_.splits;
    std::vector<LiveBranch> next;
    next.reserve(live_.size() + children.size());
    for (std::size_t i = 0; i < live_.size(); ++i) {
      if (!retired[i]) next.push_back(std::move(live_[i]));
    }
    for (auto& c : children) next.push_back(std::move(c));
    live_ = std::move(next);
  }

  const Problem& p_;
  const SolveConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  std::vector<LiveBranch> live_;
  BranchId next_id_ = 1;
  SolveStats stats_;
};

}  // namespace

SolveOutcome solve(const Problem& p, const SolveConfig& cfg) {
  const auto violations = validate_problem(p);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw std::invalid_argument("invalid problem: " + to_string(v.kind) +
                                (v.message.empty() ? "" : " (" + v.message + ")"));
  }
  validate(cfg.heuristic);
  Engine engine(p, cfg);
  SolveOutcome out = engine.run();
  if (cfg.verify) {
    if (const Solution* s = out.solution()) {
      out.verification = verify_solution(p, s->x, cfg.verify_depth);
    }
  }
  return out;
}

}  // namespace efsolver
