#include "cli.hpp"

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "efsolver/errors.hpp"
#include "efsolver/parser.hpp"

namespace efsolver::cli {

void to_json(nlohmann::json& j, const RunReport& r) {
  j = nlohmann::json{{"outcome_kind", r.outcome_kind},
                     {"x_values", r.x_values},
                     {"splits", r.splits},
                     {"boxes_split", r.boxes_split},
                     {"lp_solves", r.lp_solves},
                     {"wall_time_ms", r.wall_time_ms},
                     {"strategy", r.strategy},
                     {"epsilon", r.epsilon},
                     {"verified", r.verified}};
  if (!r.instance.empty()) j["instance"] = r.instance;
  if (!r.detail.empty()) j["detail"] = r.detail;
}

void from_json(const nlohmann::json& j, RunReport& r) {
  j.at("outcome_kind").get_to(r.outcome_kind);
  j.at("x_values").get_to(r.x_values);
  j.at("splits").get_to(r.splits);
  r.boxes_split = j.value("boxes_split", std::size_t{0});
  j.at("lp_solves").get_to(r.lp_solves);
  j.at("wall_time_ms").get_to(r.wall_time_ms);
  j.at("strategy").get_to(r.strategy);
  j.at("epsilon").get_to(r.epsilon);
  j.at("verified").get_to(r.verified);
  r.instance = j.value("instance", "");
  r.detail = j.value("detail", "");
}

SolveConfig make_config(const SolveFlags& flags) {
  SolveConfig cfg;
  cfg.heuristic.strategy = flags.strategy;
  cfg.heuristic.epsilon = flags.epsilon;
  cfg.heuristic.aging_kappa = flags.kappa;
  cfg.max_splits = flags.max_splits;
  cfg.time_budget = flags.time_budget;
  cfg.verify = flags.verify;
  return cfg;
}

RunReport run(const Problem& p, const SolveFlags& flags, const std::string& instance) {
  const SolveOutcome out = solve(p, make_config(flags));
  RunReport r;
  r.instance = instance;
  r.splits = out.stats.splits;
  r.boxes_split = out.stats.boxes_split;
  r.lp_solves = out.stats.lp_solves;
  r.wall_time_ms = out.stats.wall_time_ms;
  r.strategy = to_string(flags.strategy);
  r.epsilon = flags.epsilon;
  if (const Solution* s = out.solution()) {
    r.outcome_kind = "solution";
    r.x_values.assign(s->x.data(), s->x.data() + s->x.size());
    if (out.verification) {
      r.verified = std::holds_alternative<Verified>(*out.verification);
      if (const auto* c = std::get_if<Counterexample>(&*out.verification)) {
        r.detail = c->equality ? "equality " + std::to_string(*c->equality + 1) + " violated"
                               : "counterexample in branch " + std::to_string(c->branch + 1);
      } else if (const auto* u = std::get_if<Unknown>(&*out.verification)) {
        r.detail = "verification undecided in branch " + std::to_string(u->branch + 1);
      }
    }
  } else if (const auto* inf = std::get_if<Infeasible>(&out.result)) {
    r.outcome_kind = "infeasible";
    r.detail = inf->reason;
  } else {
    r.outcome_kind = "budget_exhausted";
    r.detail = std::get<BudgetExhausted>(out.result).reason;
  }
  return r;
}

int exit_code(const RunReport& r) {
  if (r.outcome_kind == "solution") return kSolution;
  if (r.outcome_kind == "infeasible") return kInfeasible;
  return kBudget;
}

namespace {

void print_human(const RunReport& r, const Problem& p, bool verify, std::ostream& out) {
  out << "outcome: " << r.outcome_kind;
  if (!r.detail.empty()) out << " (" << r.detail << ")";
  out << '\n';
  for (std::size_t j = 0; j < r.x_values.size(); ++j) {
    out << "  " << p.x_vars[j] << " = " << std::setprecision(17) << r.x_values[j] << '\n';
  }
  out << std::setprecision(6) << "splits: " << r.splits << "  boxes split: " << r.boxes_split << "  lp solves: " << r.lp_solves
      << "  time: " << std::fixed << std::setprecision(3) << r.wall_time_ms << " ms\n"
      << std::defaultfloat;
  if (verify && r.outcome_kind == "solution") {
    out << "verified: " << (r.verified ? "yes" : "no") << '\n';
  }
}

}  // namespace

int cmd_solve(const std::filesystem::path& file, const SolveFlags& flags,
              std::ostream& out, std::ostream& err) {
  Problem p;
  try {
    p = parse_problem_file(file);
  } catch (const std::exception& e) {
    err << file.string() << ": " << e.what() << '\n';
    return kInputError;
  }
  const auto violations = validate_problem(p);
  if (!violations.empty()) {
    for (const auto& v : violations) {
      err << file.string() << ": " << to_string(v.kind);
      if (v.branch) err << " in branch " << *v.branch + 1;
      if (!v.message.empty()) err << ": " << v.message;
      err << '\n';
    }
    return kInputError;
  }
  RunReport r;
  try {
    r = run(p, flags, file.stem().string());
  } catch (const std::invalid_argument& e) {
    err << e.what() << '\n';
    return kInputError;
  }
  if (flags.json) {
    out << nlohmann::json(r).dump() << '\n';
  } else {
    print_human(r, p, flags.verify, out);
  }
  return exit_code(r);
}

std::filesystem::path default_problem_dir() { return EFSOLVER_PROBLEM_DIR; }

int cmd_bench(const BenchFlags& flags, std::ostream& out, std::ostream& err) {
  const auto dir = flags.dir.empty() ? default_problem_dir() : flags.dir;
  const std::vector<std::string> names{"A", "B", "C", "D"};
  const std::vector<Strategy> strategies{Strategy::RoundRobin, Strategy::SplitWorst,
                                         Strategy::SplitAll};

  std::vector<std::vector<RunReport>> table;
  for (const auto& name : names) {
    Problem p;
    try {
      p = parse_problem_file(dir / (name + ".efp"));
    } catch (const std::exception& e) {
      err << name << ": " << e.what() << '\n';
      return kInputError;
    }
    auto& row = table.emplace_back();
    for (Strategy s : strategies) {
      SolveFlags f;
      f.strategy = s;
      f.time_budget = flags.time_budget;
      f.max_splits = flags.max_splits;
      f.verify = true;
      row.push_back(run(p, f, name));
      if (flags.json) out << nlohmann::json(row.back()).dump() << '\n' << std::flush;
    }
  }
  if (flags.json) return 0;

  auto cell = [](const RunReport& r) {
    char buf[64];
    if (r.outcome_kind == "solution") {
      std::snprintf(buf, sizeof buf, "%8zu %9.3f", r.splits, r.wall_time_ms / 1000.0);
    } else if (r.outcome_kind == "infeasible") {
      std::snprintf(buf, sizeof buf, "%18s", "infeasible");
    } else {
      std::snprintf(buf, sizeof buf, "%8s %9s", "-", "timeout");
    }
    return std::string(buf);
  };
  out << "   |" << "       round-robin |" << "       split-worst |" << "         split-all |\n";
  out << "   |" << "   splits  time(s) |" << "   splits  time(s) |" << "   splits  time(s) |\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << ' ' << names[i] << " |";
    for (const auto& r : table[i]) out << cell(r) << " |";
    out << '\n';
  }
  out << "timeout: no solution within " << flags.max_splits << " splits or "
      << flags.time_budget << " s\n";
  return 0;
}

}  // namespace efsolver::cli
