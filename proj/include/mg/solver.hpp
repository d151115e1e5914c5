#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mg/eval.hpp"
#include "mg/grammar.hpp"
#include "mg/problem.hpp"

namespace mg {

enum class SolveStatus { Solved, Timeout, Error, Infeasible };

std::string to_string(SolveStatus s);
SolveStatus status_from_string(const std::string& s);

struct SolveOutcome {
  SolveStatus status = SolveStatus::Error;
  std::optional<Term> solution;  // set iff Solved
  std::string message;
  double runtime_seconds = 0.0;
  std::uint64_t cost = 0;  // candidates enumerated (builtin only)

  bool solved() const { return status == SolveStatus::Solved; }

  static SolveOutcome error(std::string message) {
    SolveOutcome o;
    o.status = SolveStatus::Error;
    o.message = std::move(message);
    return o;
  }
};

struct BuiltinSolver {
  std::size_t max_term_size = 8;
  std::uint64_t max_candidates = 2'000'000;
};

struct ExternalSolver {
  std::string command_template;  // contains exactly one {input}
  std::string dialect = "sygus-v2";
  bool keep_temp = false;
};

class SolverSpec {
 public:
  static SolverSpec builtin(std::size_t max_term_size = 8, std::uint64_t max_candidates = 2'000'000);
  /// Throws std::invalid_argument unless the template has exactly one `{input}`.
  static SolverSpec external(std::string command_template, bool keep_temp = false);

  bool is_builtin() const { return std::holds_alternative<BuiltinSolver>(kind_); }
  const BuiltinSolver& as_builtin() const { return std::get<BuiltinSolver>(kind_); }
  const ExternalSolver& as_external() const { return std::get<ExternalSolver>(kind_); }

  /// Stable identifier used in run records and cache keys.
  std::string id() const;

 private:
  std::variant<BuiltinSolver, ExternalSolver> kind_;
};

struct RunLimits {
  double timeout_seconds = 300.0;
  unsigned max_parallel = 20;
  double grace_seconds = 2.0;

  void validate() const;
};

using Deadline = std::chrono::steady_clock::time_point;

/// Solves `p` restricted to `g` with the given backend. Builtin solutions are
/// verified exhaustively before being returned.
SolveOutcome solve(const SynthProblem& p, const Grammar& g, const SolverSpec& s, const RunLimits& limits);

/// Bottom-up enumeration by term size with observational-equivalence
/// pruning. Deterministic: cost and solution depend only on the inputs.
SolveOutcome enumerate_solve(const SynthProblem& p, const Grammar& g, std::size_t max_term_size,
                             std::uint64_t max_candidates, std::optional<Deadline> deadline = std::nullopt);

struct VerifyResult {
  bool ok = false;
  Env counterexample;  // first failing assignment, lexicographic
  std::string message;
};

/// Largest number of universal assignments `verify` will enumerate.
inline constexpr std::uint64_t kMaxInputSpace = std::uint64_t{1} << 16;

/// True if every universal variable is Bool or at most 8 bits wide and the
/// product of the domains is at most kMaxInputSpace.
bool exhaustively_checkable(const SynthProblem& p);

/// Exhaustive validity check of the constraints with `candidate` as the
/// target body. Throws std::invalid_argument if the input space is too large.
VerifyResult verify(const Term& candidate, const SynthProblem& p);

struct SolveJob {
  SynthProblem problem;
  Grammar grammar;
  SolverSpec solver;
};

/// Runs jobs with at most limits.max_parallel in flight. Results follow the
/// input order; a failing job only affects its own outcome.
std::vector<SolveOutcome> run_batch(const std::vector<SolveJob>& jobs, const RunLimits& limits);

}  // namespace mg
