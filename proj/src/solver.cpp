#include "mg/solver.hpp"

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "mg/errors.hpp"
#include "mg/parser.hpp"
#include "mg/printer.hpp"
#include "mg/subprocess.hpp"

namespace mg {
namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t domain_size(const Sort& s) { return s.is_bool() ? 2 : (std::uint64_t{1} << s.width()); }

constexpr std::string_view kPlaceholder = "{input}";

std::size_t count_placeholders(const std::string& s) {
  std::size_t n = 0;
  for (auto pos = s.find(kPlaceholder); pos != std::string::npos; pos = s.find(kPlaceholder, pos + 1)) ++n;
  return n;
}

// Writes the problem to a private temp file; removes it on scope exit unless kept.
class TempProblemFile {
 public:
  TempProblemFile(const std::string& contents, bool keep) : keep_(keep) {
    std::string pattern = (std::filesystem::temp_directory_path() / "mgsynth-XXXXXX.sl").string();
    const int fd = ::mkstemps(pattern.data(), 3);
    if (fd < 0) throw std::runtime_error("cannot create temporary problem file");
    ::close(fd);
    path_ = pattern;
    std::ofstream out(path_);
    out << contents;
    if (!out) throw std::runtime_error("cannot write " + path_);
  }
  ~TempProblemFile() {
    if (!keep_) {
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }
  TempProblemFile(const TempProblemFile&) = delete;
  TempProblemFile& operator=(const TempProblemFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  bool keep_;
};

SolveOutcome solve_external(const SynthProblem& p, const Grammar& g, const ExternalSolver& s,
                            const RunLimits& limits) {
  const bool keep = s.keep_temp || std::getenv("MG_KEEP_TEMP") != nullptr;
  TempProblemFile file(print_problem(p.with_grammar(g)), keep);
  std::string command = s.command_template;
  command.replace(command.find(kPlaceholder), kPlaceholder.size(), shell_quote(file.path()));

  const ProcessResult r = run_process(command, limits.timeout_seconds, limits.grace_seconds);
  SolveOutcome o;
  o.runtime_seconds = r.seconds;
  if (r.timed_out) {
    o.status = SolveStatus::Timeout;
    o.runtime_seconds = std::min(r.seconds, limits.timeout_seconds + limits.grace_seconds);
    return o;
  }
  if (r.exit_code != 0) {
    o.status = SolveStatus::Error;
    o.message = "solver exited with status " + std::to_string(r.exit_code);
    if (!r.err.empty()) o.message += ": " + r.err.substr(0, 400);
    return o;
  }
  try {
    for (const auto& e : read_sexprs(r.out)) {
      if (e.is_symbol("infeasible")) {
        o.status = SolveStatus::Infeasible;
        return o;
      }
    }
    FunctionDef answer = parse_solver_answer(r.out, p);
    if (!g.derives(answer.body)) {
      o.status = SolveStatus::Error;
      o.message = "solution is not derivable from the grammar: " + print_term(answer.body);
      return o;
    }
    if (exhaustively_checkable(p)) {
      const VerifyResult v = verify(answer.body, p);
      if (!v.ok) {
        o.status = SolveStatus::Error;
        o.message = "solver returned an invalid solution: " + print_term(answer.body);
        return o;
      }
    }
    o.status = SolveStatus::Solved;
    o.solution = std::move(answer.body);
  } catch (const std::exception& e) {
    o.status = SolveStatus::Error;
    o.message = std::string("unparseable solver output: ") + e.what();
  }
  return o;
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Timeout: return "timeout";
    case SolveStatus::Error: return "error";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "error";
}

SolveStatus status_from_string(const std::string& s) {
  if (s == "solved") return SolveStatus::Solved;
  if (s == "timeout") return SolveStatus::Timeout;
  if (s == "infeasible") return SolveStatus::Infeasible;
  if (s == "error") return SolveStatus::Error;
  throw std::invalid_argument("unknown status '" + s + "'");
}

SolverSpec SolverSpec::builtin(std::size_t max_term_size, std::uint64_t max_candidates) {
  if (max_term_size == 0 || max_candidates == 0) throw std::invalid_argument("builtin budgets must be positive");
  SolverSpec s;
  s.kind_ = BuiltinSolver{max_term_size, max_candidates};
  return s;
}

SolverSpec SolverSpec::external(std::string command_template, bool keep_temp) {
  if (count_placeholders(command_template) != 1) {
    throw std::invalid_argument("solver command must contain exactly one {input} placeholder");
  }
  SolverSpec s;
  s.kind_ = ExternalSolver{std::move(command_template), "sygus-v2", keep_temp};
  return s;
}

std::string SolverSpec::id() const {
  if (is_builtin()) {
    const auto& b = as_builtin();
    return "builtin:size=" + std::to_string(b.max_term_size) + ":cands=" + std::to_string(b.max_candidates);
  }
  return "external:" + as_external().command_template;
}

void RunLimits::validate() const {
  if (!(timeout_seconds >= 1.0)) throw std::invalid_argument("timeout must be at least 1 second");
  if (max_parallel < 1) throw std::invalid_argument("max_parallel must be at least 1");
  if (grace_seconds < 0) throw std::invalid_argument("grace period must be nonnegative");
}

bool exhaustively_checkable(const SynthProblem& p) {
  std::uint64_t space = 1;
  for (const auto& v : p.universal_vars) {
    if (v.sort.is_bitvec() && v.sort.width() > 8) return false;
    space *= domain_size(v.sort);
    if (space > kMaxInputSpace) return false;
  }
  return true;
}

VerifyResult verify(const Term& candidate, const SynthProblem& p) {
  if (!exhaustively_checkable(p)) throw std::invalid_argument("input space too large for exhaustive verification");
  VerifyResult result;
  if (candidate.sort() != p.target.return_sort) {
    result.message = "candidate has sort " + candidate.sort().to_string();
    return result;
  }
  const FunctionDef def{p.target, candidate};
  std::uint64_t total = 1;
  for (const auto& v : p.universal_vars) total *= domain_size(v.sort);

  Env env;
  for (std::uint64_t u = 0; u < total; ++u) {
    std::uint64_t rest = u;
    for (std::size_t i = p.universal_vars.size(); i-- > 0;) {
      const auto& v = p.universal_vars[i];
      env.insert_or_assign(v.name, Value{v.sort, rest % domain_size(v.sort)});
      rest /= domain_size(v.sort);
    }
    for (std::size_t c = 0; c < p.constraints.size(); ++c) {
      if (!eval_term(p.constraints[c], env, p.helper_defs, &def).as_bool()) {
        result.counterexample = env;
        result.message = "constraint " + std::to_string(c + 1) + " fails";
        return result;
      }
    }
  }
  result.ok = true;
  return result;
}

SolveOutcome solve(const SynthProblem& p, const Grammar& g, const SolverSpec& s, const RunLimits& limits) {
  limits.validate();
  if (!s.is_builtin()) return solve_external(p, g, s.as_external(), limits);

  const auto& b = s.as_builtin();
  const Deadline deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(limits.timeout_seconds));
  SolveOutcome o = enumerate_solve(p, g, b.max_term_size, b.max_candidates, deadline);
  if (o.solved()) {
    const VerifyResult v = verify(*o.solution, p);
    if (!v.ok) {
      o.status = SolveStatus::Error;
      o.message = "internal error: enumerated candidate failed verification: " + print_term(*o.solution);
      o.solution.reset();
    }
  }
  return o;
}

std::vector<SolveOutcome> run_batch(const std::vector<SolveJob>& jobs, const RunLimits& limits) {
  limits.validate();
  std::vector<SolveOutcome> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = solve(jobs[i].problem, jobs[i].grammar, jobs[i].solver, limits);
      } catch (const std::exception& e) {
        results[i] = SolveOutcome::error(e.what());
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(limits.max_parallel, jobs.size());
  if (n <= 1) {
    worker();
    return results;
  }
  {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  return results;
}

}  // namespace mg
