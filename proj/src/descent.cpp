#include "mg/descent.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <stdexcept>

namespace mg {

std::string to_string(Aggregate a) { return a == Aggregate::Sum ? "sum" : "mean"; }

Aggregate aggregate_from_string(const std::string& s) {
  if (s == "sum") return Aggregate::Sum;
  if (s == "mean") return Aggregate::Mean;
  throw std::invalid_argument("unknown aggregate '" + s + "'");
}

void SearchConfig::validate() const {
  limits.validate();
  if (!(unsolved_penalty > 0)) throw std::invalid_argument("unsolved penalty must be positive");
}

double scoring_runtime(const SolveOutcome& o, CostMode mode) {
  return mode == CostMode::WallClock ? o.runtime_seconds : static_cast<double>(o.cost);
}

ScoreContext ScoreContext::build(std::string benchmark_id, std::vector<ComparisonMember> members) {
  ScoreContext ctx{std::move(benchmark_id), std::move(members), 0.0};
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& m : ctx.members) {
    if (m.solved) {
      sum += m.runtime;
      ++n;
    }
  }
  if (n > 0) {
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (const auto& m : ctx.members) {
      if (m.solved) sq += (m.runtime - mean) * (m.runtime - mean);
    }
    ctx.sigma = std::sqrt(sq / static_cast<double>(n));
  }
  return ctx;
}

const ComparisonMember* ScoreContext::find(const std::string& id) const {
  for (const auto& m : members) {
    if (m.metagrammar_id == id) return &m;
  }
  return nullptr;
}

double ScoreContext::neighbor_mean(const std::string& id) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& m : members) {
    if (m.solved && m.metagrammar_id != id) {
      sum += m.runtime;
      ++n;
    }
  }
  return n == 0 ? std::nan("") : sum / static_cast<double>(n);
}

double score_benchmark(const std::string& metagrammar_id, const ScoreContext& ctx, double penalty) {
  const ComparisonMember* m = ctx.find(metagrammar_id);
  if (m == nullptr) throw std::invalid_argument("metagrammar " + metagrammar_id + " is not in the comparison set");
  if (!m->solved) return penalty;
  const double mean = ctx.neighbor_mean(metagrammar_id);
  if (std::isnan(mean) || ctx.sigma == 0.0) return 0.0;
  return (m->runtime - mean) / ctx.sigma;
}

double score_metagrammar(std::span<const double> per_benchmark, Aggregate aggregate) {
  if (per_benchmark.empty()) throw std::invalid_argument("empty training set");
  double sum = 0.0;
  for (double s : per_benchmark) sum += s;
  return aggregate == Aggregate::Sum ? sum : sum / static_cast<double>(per_benchmark.size());
}

CandidateResult summarize(Metagrammar m, std::vector<SolveOutcome> outcomes, CostMode mode) {
  CandidateResult r;
  r.metagrammar = std::move(m);
  r.outcomes = std::move(outcomes);
  double sum = 0.0;
  for (const auto& o : r.outcomes) {
    r.total_cost += o.cost;
    if (o.solved()) {
      ++r.solved;
      sum += scoring_runtime(o, mode);
    }
  }
  if (r.solved > 0) r.mean_runtime = sum / static_cast<double>(r.solved);
  return r;
}

namespace {

// Lower aggregate, then more solved, then faster, then lexicographic id.
bool better_candidate(const CandidateResult& a, const CandidateResult& b) {
  if (a.aggregate != b.aggregate) return a.aggregate < b.aggregate;
  if (a.solved != b.solved) return a.solved > b.solved;
  if (a.mean_runtime != b.mean_runtime) return a.mean_runtime < b.mean_runtime;
  return a.metagrammar.id() < b.metagrammar.id();
}

nlohmann::ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::ordered_json rules_json(const Metagrammar& m) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& id : m.rule_ids()) arr.push_back(id);
  return arr;
}

}  // namespace

SearchTrace descend(const Metagrammar& start, std::span<const Benchmark> training, const SolverSpec& solver,
                    const SearchConfig& cfg, ResultsCache* cache) {
  cfg.validate();
  if (start.empty()) throw std::invalid_argument("descent needs a metagrammar with at least one rule");
  if (training.empty()) throw std::invalid_argument("descent needs a nonempty training set");

  SearchTrace trace;
  trace.start = start;
  trace.config = cfg;
  trace.solver_id = solver.id();
  for (const auto& b : training) trace.benchmark_ids.push_back(b.id);

  Evaluator evaluator(solver, cfg.limits, cfg.cost_mode, cache);
  Metagrammar parent = start;
  while (true) {
    std::vector<Metagrammar> candidates{parent};
    for (auto& n : neighbors(parent)) candidates.push_back(std::move(n));

    const std::size_t inv0 = evaluator.invocations();
    const std::size_t hit0 = evaluator.cache_hits();
    auto outcomes = evaluator.evaluate(candidates, training);

    SearchLevel level;
    level.parent = parent;
    level.solver_invocations = evaluator.invocations() - inv0;
    level.cache_hits = evaluator.cache_hits() - hit0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      level.candidates.push_back(summarize(candidates[c], std::move(outcomes[c]), cfg.cost_mode));
    }
    for (std::size_t b = 0; b < training.size(); ++b) {
      std::vector<ComparisonMember> members;
      for (const auto& c : level.candidates) {
        const auto& o = c.outcomes[b];
        members.push_back({c.metagrammar.id(), o.solved(), scoring_runtime(o, cfg.cost_mode)});
      }
      const ScoreContext ctx = ScoreContext::build(training[b].id, std::move(members));
      for (auto& c : level.candidates) c.scores.push_back(score_benchmark(c.metagrammar.id(), ctx, cfg.unsolved_penalty));
    }
    for (auto& c : level.candidates) c.aggregate = score_metagrammar(c.scores, cfg.aggregate);

    level.chosen = 1;
    for (std::size_t c = 2; c < level.candidates.size(); ++c) {
      if (better_candidate(level.candidates[c], level.candidates[level.chosen])) level.chosen = c;
    }
    const bool any_solved = std::any_of(level.candidates.begin() + 1, level.candidates.end(),
                                        [](const CandidateResult& c) { return c.solved > 0; });
    parent = level.chosen_result().metagrammar;
    trace.levels.push_back(std::move(level));

    if (!any_solved) {
      trace.stop_reason = "no neighbor solves any training benchmark";
      break;
    }
    if (parent.empty()) {
      trace.stop_reason = "rules exhausted";
      break;
    }
  }
  trace.final = select_final(trace);
  return trace;
}

const CandidateResult& select_final(std::span<const CandidateResult> contenders) {
  if (contenders.empty()) throw std::invalid_argument("no contenders");
  const CandidateResult* best = &contenders.front();
  for (const auto& c : contenders.subspan(1)) {
    if (c.solved > best->solved || (c.solved == best->solved && c.mean_runtime < best->mean_runtime)) best = &c;
  }
  return *best;
}

Metagrammar select_final(const SearchTrace& trace) {
  if (trace.levels.empty()) throw std::invalid_argument("empty search trace");
  std::vector<CandidateResult> contenders{trace.levels.front().candidates.front()};
  for (const auto& level : trace.levels) contenders.push_back(level.chosen_result());
  return select_final(contenders).metagrammar;
}

void write_trace(const SearchTrace& trace, std::ostream& out) {
  const bool wall = trace.config.cost_mode == CostMode::WallClock;
  nlohmann::ordered_json header;
  header["type"] = "search";
  header["start"] = trace.start.id();
  header["start_rules"] = rules_json(trace.start);
  header["benchmarks"] = trace.benchmark_ids;
  header["solver"] = trace.solver_id;
  header["timeout"] = trace.config.limits.timeout_seconds;
  header["cost_mode"] = to_string(trace.config.cost_mode);
  header["aggregate"] = to_string(trace.config.aggregate);
  header["unsolved_penalty"] = trace.config.unsolved_penalty;
  header["comparison_set"] = "parent and its smaller neighbors";
  header["sigma"] = "population standard deviation over solved members, including the scored metagrammar";
  header["unsolved_in_mean_and_sigma"] = false;
  out << header.dump() << "\n";

  for (std::size_t l = 0; l < trace.levels.size(); ++l) {
    const auto& level = trace.levels[l];
    for (const auto& c : level.candidates) {
      for (std::size_t b = 0; b < c.outcomes.size(); ++b) {
        const auto& o = c.outcomes[b];
        nlohmann::ordered_json run;
        run["type"] = "run";
        run["level"] = l + 1;
        run["metagrammar"] = c.metagrammar.id();
        run["benchmark"] = trace.benchmark_ids[b];
        run["status"] = to_string(o.status);
        if (wall) run["runtime_seconds"] = o.runtime_seconds;
        run["cost"] = o.cost;
        run["score"] = number_or_null(c.scores[b]);
        out << run.dump() << "\n";
      }
    }
    for (const auto& c : level.candidates) {
      nlohmann::ordered_json cand;
      cand["type"] = "candidate";
      cand["level"] = l + 1;
      cand["metagrammar"] = c.metagrammar.id();
      cand["rules"] = rules_json(c.metagrammar);
      cand["aggregate"] = number_or_null(c.aggregate);
      cand["solved"] = c.solved;
      cand["mean_runtime"] = number_or_null(c.mean_runtime);
      cand["total_cost"] = c.total_cost;
      out << cand.dump() << "\n";
    }
    nlohmann::ordered_json lv;
    lv["type"] = "level";
    lv["level"] = l + 1;
    lv["parent"] = level.parent.id();
    lv["chosen"] = level.chosen_result().metagrammar.id();
    out << lv.dump() << "\n";
  }
  nlohmann::ordered_json fin;
  fin["type"] = "final";
  fin["metagrammar"] = trace.final.id();
  fin["rules"] = rules_json(trace.final);
  fin["stop_reason"] = trace.stop_reason;
  out << fin.dump() << "\n";
}

}  // namespace mg
