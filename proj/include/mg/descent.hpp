#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mg/cache.hpp"
#include "mg/evaluator.hpp"
#include "mg/metagrammar.hpp"

namespace mg {

enum class Aggregate { Sum, Mean };

std::string to_string(Aggregate a);
Aggregate aggregate_from_string(const std::string& s);

struct SearchConfig {
  CostMode cost_mode = CostMode::WallClock;
  RunLimits limits;
  double unsolved_penalty = 10.0;
  Aggregate aggregate = Aggregate::Sum;

  void validate() const;
};

/// Runtime used for scoring: wall-clock seconds, or enumeration cost.
double scoring_runtime(const SolveOutcome& o, CostMode mode);

struct ComparisonMember {
  std::string metagrammar_id;
  bool solved = false;
  double runtime = 0.0;
};

/// Results of one benchmark across a comparison set (a parent and its
/// smaller neighbors). `sigma` is the population standard deviation of the
/// solved members' runtimes; unsolved members have no runtime and are left out.
struct ScoreContext {
  std::string benchmark_id;
  std::vector<ComparisonMember> members;
  double sigma = 0.0;

  static ScoreContext build(std::string benchmark_id, std::vector<ComparisonMember> members);

  const ComparisonMember* find(const std::string& id) const;

  /// Mean runtime of the solved members other than `id`; NaN if there are none.
  double neighbor_mean(const std::string& id) const;
};

/// Unsolved: `penalty`. Solved: (r_M - mean of solved siblings) / sigma,
/// or 0 when sigma is 0 or no sibling solved. Lower is better.
double score_benchmark(const std::string& metagrammar_id, const ScoreContext& ctx, double penalty = 10.0);

/// Sum or mean of per-benchmark scores. Throws std::invalid_argument on an
/// empty training set.
double score_metagrammar(std::span<const double> per_benchmark, Aggregate aggregate = Aggregate::Sum);

struct CandidateResult {
  Metagrammar metagrammar;
  std::vector<SolveOutcome> outcomes;  // one per training benchmark
  std::vector<double> scores;
  double aggregate = 0.0;
  std::size_t solved = 0;
  double mean_runtime = std::numeric_limits<double>::infinity();  // over solved
  std::uint64_t total_cost = 0;
};

/// Builds the per-candidate summary (solved count, mean runtime, cost) without scores.
CandidateResult summarize(Metagrammar m, std::vector<SolveOutcome> outcomes, CostMode mode);

struct SearchLevel {
  Metagrammar parent;
  std::vector<CandidateResult> candidates;  // [0] is the parent, then its neighbors
  std::size_t chosen = 0;                   // index into candidates
  std::size_t solver_invocations = 0;
  std::size_t cache_hits = 0;

  const CandidateResult& chosen_result() const { return candidates[chosen]; }
};

struct SearchTrace {
  Metagrammar start;
  std::vector<std::string> benchmark_ids;
  std::vector<SearchLevel> levels;
  Metagrammar final;
  std::string stop_reason;
  SearchConfig config;
  std::string solver_id;
};

/// Greedy smaller-neighbor descent: evaluate the parent and all its
/// neighbors, move to the best-scoring neighbor, repeat until the rules run
/// out or no neighbor solves anything.
SearchTrace descend(const Metagrammar& start, std::span<const Benchmark> training, const SolverSpec& solver,
                    const SearchConfig& cfg, ResultsCache* cache = nullptr);

/// Picks the contender that solves the most benchmarks, then has the lowest
/// mean runtime over solved ones. Ties go to the earlier contender.
const CandidateResult& select_final(std::span<const CandidateResult> contenders);

/// Contenders are the start metagrammar and every level's chosen candidate.
Metagrammar select_final(const SearchTrace& trace);

/// JSON-lines log: a header, one `run` record per candidate per benchmark,
/// candidate and level summaries, and the final metagrammar.
void write_trace(const SearchTrace& trace, std::ostream& out);

}  // namespace mg
