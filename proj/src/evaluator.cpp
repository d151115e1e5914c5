#include "mg/evaluator.hpp"

#include "mg/errors.hpp"
#include "mg/parser.hpp"
#include "mg/printer.hpp"

namespace mg {
namespace {

SolveOutcome outcome_from_record(const RunRecord& r, const SynthProblem& p) {
  SolveOutcome o;
  o.status = r.status;
  o.runtime_seconds = r.runtime_seconds;
  o.cost = r.cost;
  o.message = r.message;
  if (r.status == SolveStatus::Solved && r.solution_text) {
    try {
      o.solution = parse_term(*r.solution_text, p, p.target.params);
    } catch (const std::exception& e) {
      o.status = SolveStatus::Error;
      o.message = std::string("cached solution does not parse: ") + e.what();
    }
  }
  return o;
}

}  // namespace

RunRecord make_run_record(const std::string& benchmark_id, const Metagrammar& m, const std::string& solver_id,
                          double timeout, CostMode mode, const SolveOutcome& o) {
  RunRecord r;
  r.benchmark_id = benchmark_id;
  r.metagrammar_id = m.id();
  r.metagrammar_digest = m.digest();
  r.solver_id = solver_id;
  r.timeout = timeout;
  r.cost_mode = mode;
  r.status = o.status;
  r.runtime_seconds = o.runtime_seconds;
  r.cost = o.cost;
  if (o.solution) r.solution_text = print_term(*o.solution);
  r.message = o.message;
  r.timestamp = utc_timestamp();
  return r;
}

Evaluator::Evaluator(SolverSpec solver, RunLimits limits, CostMode mode, ResultsCache* cache)
    : solver_(std::move(solver)), limits_(limits), mode_(mode), cache_(cache) {
  limits_.validate();
}

std::vector<std::vector<SolveOutcome>> Evaluator::evaluate(std::span<const Metagrammar> candidates,
                                                           std::span<const Benchmark> benchmarks) {
  std::vector<std::vector<SolveOutcome>> out(candidates.size(), std::vector<SolveOutcome>(benchmarks.size()));
  const std::string solver_id = solver_.id();

  struct Pending {
    std::size_t c;
    std::size_t b;
  };
  std::vector<Pending> pending;
  std::vector<SolveJob> jobs;
  std::vector<Pending> failed_materialize;

  std::vector<std::string> digests;
  for (const auto& m : candidates) digests.push_back(m.digest());

  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (std::size_t b = 0; b < benchmarks.size(); ++b) {
      const std::string key = cache_key(benchmarks[b].id, digests[c], solver_id, limits_.timeout_seconds, mode_);
      if (cache_ != nullptr) {
        if (auto r = cache_->find(key)) {
          out[c][b] = outcome_from_record(*r, benchmarks[b].problem);
          ++cache_hits_;
          continue;
        }
      }
      ++invocations_;
      try {
        Grammar g = materialize(candidates[c], benchmarks[b].problem);
        pending.push_back({c, b});
        jobs.push_back({benchmarks[b].problem, std::move(g), solver_});
      } catch (const MaterializeError& e) {
        out[c][b] = SolveOutcome::error(e.what());
        failed_materialize.push_back({c, b});
      }
    }
  }

  const auto results = run_batch(jobs, limits_);
  for (std::size_t i = 0; i < pending.size(); ++i) out[pending[i].c][pending[i].b] = results[i];

  if (cache_ != nullptr) {
    auto record = [&](const Pending& pd) {
      cache_->append(make_run_record(benchmarks[pd.b].id, candidates[pd.c], solver_id, limits_.timeout_seconds, mode_,
                                     out[pd.c][pd.b]));
    };
    for (const auto& pd : pending) record(pd);
    for (const auto& pd : failed_materialize) record(pd);
  }
  return out;
}

}  // namespace mg
