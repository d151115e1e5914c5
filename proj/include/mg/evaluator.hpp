#pragma once

#include <span>
#include <string>
#include <vector>

#include "mg/cache.hpp"
#include "mg/metagrammar.hpp"
#include "mg/solver.hpp"

namespace mg {

struct Benchmark {
  std::string id;
  std::string category;
  SynthProblem problem;
};

RunRecord make_run_record(const std::string& benchmark_id, const Metagrammar& m, const std::string& solver_id,
                          double timeout, CostMode mode, const SolveOutcome& o);

/// Runs (metagrammar x benchmark) grids through run_batch, serving repeated
/// runs from an optional results cache.
class Evaluator {
 public:
  Evaluator(SolverSpec solver, RunLimits limits, CostMode mode, ResultsCache* cache = nullptr);

  /// outcomes[c][b] for candidate c on benchmark b.
  std::vector<std::vector<SolveOutcome>> evaluate(std::span<const Metagrammar> candidates,
                                                  std::span<const Benchmark> benchmarks);

  /// Solver runs issued (including materialization failures), excluding cache hits.
  std::size_t invocations() const { return invocations_; }
  std::size_t cache_hits() const { return cache_hits_; }

  const SolverSpec& solver() const { return solver_; }
  const RunLimits& limits() const { return limits_; }
  CostMode cost_mode() const { return mode_; }

 private:
  SolverSpec solver_;
  RunLimits limits_;
  CostMode mode_;
  ResultsCache* cache_;
  std::size_t invocations_ = 0;
  std::size_t cache_hits_ = 0;
};

}  // namespace mg
