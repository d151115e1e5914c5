#include "mg/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "mg/cache.hpp"
#include "mg/corpus.hpp"
#include "mg/descent.hpp"
#include "mg/errors.hpp"
#include "mg/evaluator.hpp"
#include "mg/hash.hpp"
#include "mg/metagrammar.hpp"
#include "mg/parser.hpp"
#include "mg/printer.hpp"
#include "mg/report.hpp"

namespace mg {

namespace {

// Bad input supplied by the user (missing files, malformed options).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverOptions {
  std::string solver = "builtin";
  std::size_t max_size = 8;
  std::uint64_t max_candidates = 2'000'000;
  double timeout = 300.0;
  unsigned jobs = 20;
  std::string cost_mode = "wall_clock";
  std::string cache;
  bool keep_temp = false;

  void add_to(CLI::App* app) {
    app->add_option("--solver", solver, "builtin, external (uses MG_SOLVER_CMD), or a command template with {input}")
        ->capture_default_str();
    app->add_option("--max-size", max_size, "builtin solver: largest term size")->capture_default_str();
    app->add_option("--max-candidates", max_candidates, "builtin solver: candidate budget")->capture_default_str();
    app->add_option("--timeout", timeout, "per-run timeout in seconds")->capture_default_str();
    app->add_option("--jobs", jobs, "solver runs in parallel")->capture_default_str();
    app->add_option("--cost-mode", cost_mode, "wall_clock or deterministic_cost")->capture_default_str();
    app->add_option("--cache", cache, "JSON-lines results cache");
    app->add_flag("--keep-temp", keep_temp, "external solver: keep generated input files");
  }

  SolverSpec spec() const {
    if (solver == "builtin") return SolverSpec::builtin(max_size, max_candidates);
    std::string tmpl = solver;
    if (solver == "external") {
      const char* env = std::getenv("MG_SOLVER_CMD");
      if (env == nullptr || *env == '\0') throw UsageError("--solver external needs MG_SOLVER_CMD");
      tmpl = env;
    }
    try {
      return SolverSpec::external(tmpl, keep_temp);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  RunLimits limits() const {
    RunLimits l;
    l.timeout_seconds = timeout;
    l.max_parallel = jobs;
    try {
      l.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return l;
  }

  CostMode mode() const {
    try {
      return cost_mode_from_string(cost_mode);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  std::unique_ptr<ResultsCache> open_cache() const {
    if (cache.empty()) return nullptr;
    return std::make_unique<ResultsCache>(cache);
  }
};

struct CorpusOptions {
  std::string corpus;
  std::string manifest;

  void add_to(CLI::App* app) {
    app->add_option("--corpus", corpus, "directory of .sl benchmarks")->required()->check(CLI::ExistingDirectory);
    app->add_option("--manifest", manifest, "CSV of path,category")->check(CLI::ExistingFile);
  }

  std::vector<BenchmarkMeta> scan(std::ostream& err) const {
    const Manifest m = manifest.empty() ? Manifest{} : load_manifest(manifest);
    auto metas = scan_corpus(corpus, m);
    for (const auto& meta : metas) {
      if (meta.parse_status != ParseStatus::Ok) {
        err << "skipping " << meta.path << " (" << to_string(meta.parse_status) << "): " << meta.message << "\n";
      }
    }
    return metas;
  }
};

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::set<Sort> corpus_sorts(const std::vector<Benchmark>& benchmarks) {
  std::set<Sort> sorts;
  for (const auto& b : benchmarks) {
    auto s = b.problem.signature_sorts();
    sorts.insert(s.begin(), s.end());
  }
  return sorts;
}

Metagrammar resolve(const std::string& spec, const std::set<Sort>& sorts) {
  try {
    return resolve_metagrammar(spec, sorts);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::vector<BenchmarkResult> to_results(const std::vector<Benchmark>& benchmarks,
                                        const std::vector<SolveOutcome>& outcomes) {
  std::vector<BenchmarkResult> out;
  for (std::size_t i = 0; i < benchmarks.size(); ++i) {
    out.push_back({benchmarks[i].id, benchmarks[i].category, outcomes[i].solved(), outcomes[i].runtime_seconds,
                   outcomes[i].cost});
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metagrammar descent for syntax-guided synthesis", "mgsynth"};
  app.require_subcommand(1);

  std::string file;
  std::string metagrammar_spec = "default";
  std::string baseline_spec = "default";
  SolverOptions solver_opts;
  CorpusOptions corpus_opts;
  std::size_t per_category = 48;
  std::uint64_t seed = 0;
  bool holdout_only = false;
  std::string trace_path;
  std::string output_path;
  std::string csv_path;
  double penalty = 10.0;
  std::string aggregate = "sum";

  auto* parse = app.add_subcommand("parse", "validate a SyGuS file and print it normalized");
  parse->add_option("file", file, "SyGuS v2 problem")->required();

  auto* emit = app.add_subcommand("emit", "print the problem with the materialized grammar attached");
  emit->add_option("file", file, "SyGuS v2 problem")->required();
  emit->add_option("--metagrammar", metagrammar_spec, "default, enhanced, or a metagrammar file")->capture_default_str();

  auto* run = app.add_subcommand("run", "solve one problem and print the run record");
  run->add_option("file", file, "SyGuS v2 problem")->required();
  run->add_option("--metagrammar", metagrammar_spec, "default, enhanced, or a metagrammar file")->capture_default_str();
  solver_opts.add_to(run);

  auto* sample = app.add_subcommand("sample", "print a stratified training/holdout split");
  corpus_opts.add_to(sample);
  sample->add_option("--per-category", per_category, "training benchmarks per category")->capture_default_str();
  sample->add_option("--seed", seed, "sampling seed")->capture_default_str();

  auto* train = app.add_subcommand("train", "run metagrammar descent on a training sample");
  corpus_opts.add_to(train);
  train->add_option("--per-category", per_category, "training benchmarks per category")->capture_default_str();
  train->add_option("--seed", seed, "sampling seed")->capture_default_str();
  train->add_option("--metagrammar", metagrammar_spec, "start metagrammar")->capture_default_str();
  train->add_option("--trace", trace_path, "write the search trace (JSON lines)");
  train->add_option("--output", output_path, "write the final metagrammar");
  train->add_option("--penalty", penalty, "score of an unsolved benchmark")->capture_default_str();
  train->add_option("--aggregate", aggregate, "sum or mean")->capture_default_str();
  solver_opts.add_to(train);

  auto* eval = app.add_subcommand("eval", "compare a metagrammar against a baseline");
  auto* report = app.add_subcommand("report", "like eval, but only from cached records");
  for (auto* sub : {eval, report}) {
    corpus_opts.add_to(sub);
    sub->add_option("--metagrammar", metagrammar_spec, "candidate metagrammar")->required();
    sub->add_option("--baseline", baseline_spec, "baseline metagrammar")->capture_default_str();
    sub->add_flag("--holdout", holdout_only, "only benchmarks outside the training sample");
    sub->add_option("--per-category", per_category, "training sample size used with --holdout")->capture_default_str();
    sub->add_option("--seed", seed, "sampling seed used with --holdout")->capture_default_str();
    sub->add_option("--csv", csv_path, "also write the report as CSV");
    solver_opts.add_to(sub);
  }
  report->get_option("--cache")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*parse) {
      out << print_problem(parse_problem(read_input(file)));
    } else if (*emit) {
      const SynthProblem p = parse_problem(read_input(file));
      const Metagrammar m = resolve(metagrammar_spec, p.signature_sorts());
      out << print_problem(p.with_grammar(materialize(m, p)));
    } else if (*run) {
      const std::string text = read_input(file);
      const SynthProblem p = parse_problem(text);
      const Metagrammar m = resolve(metagrammar_spec, p.signature_sorts());
      const SolverSpec solver = solver_opts.spec();
      const RunLimits limits = solver_opts.limits();
      const CostMode mode = solver_opts.mode();
      auto cache = solver_opts.open_cache();
      Evaluator evaluator(solver, limits, mode, cache.get());
      const std::vector<Benchmark> bench{{normalized_content_hash(text), "", p}};
      const auto outcomes = evaluator.evaluate(std::span(&m, 1), bench);
      out << make_run_record(bench[0].id, m, solver.id(), limits.timeout_seconds, mode, outcomes[0][0]).to_json_line()
          << "\n";
    } else if (*sample) {
      if (per_category == 0) throw UsageError("--per-category must be positive");
      const Split split = stratified_sample(corpus_opts.scan(err), per_category, seed);
      for (const auto& w : split.warnings) err << "warning: " << w << "\n";
      for (const auto& m : split.training) out << "training," << m.category << "," << m.path << "\n";
      for (const auto& m : split.holdout) out << "holdout," << m.category << "," << m.path << "\n";
    } else if (*train) {
      if (per_category == 0) throw UsageError("--per-category must be positive");
      const Split split = stratified_sample(corpus_opts.scan(err), per_category, seed);
      for (const auto& w : split.warnings) err << "warning: " << w << "\n";
      const auto training = load_benchmarks(corpus_opts.corpus, split.training);
      if (training.empty()) throw UsageError("no parseable training benchmarks");
      const Metagrammar start = resolve(metagrammar_spec, corpus_sorts(training));
      if (start.empty()) throw UsageError("start metagrammar has no rules");
      SearchConfig cfg;
      cfg.cost_mode = solver_opts.mode();
      cfg.limits = solver_opts.limits();
      cfg.unsolved_penalty = penalty;
      try {
        cfg.aggregate = aggregate_from_string(aggregate);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      auto cache = solver_opts.open_cache();
      const SearchTrace trace = descend(start, training, solver_opts.spec(), cfg, cache.get());
      for (std::size_t l = 0; l < trace.levels.size(); ++l) {
        const auto& level = trace.levels[l];
        const auto& c = level.chosen_result();
        err << "level " << (l + 1) << ": " << level.candidates.size() << " candidates, "
            << level.solver_invocations << " solver runs, " << level.cache_hits << " cache hits; chose "
            << c.metagrammar.id() << " (score " << c.aggregate << ", solved " << c.solved << "/" << training.size()
            << ")\n";
      }
      err << "stopped: " << trace.stop_reason << "\n";
      if (!trace_path.empty()) {
        std::ostringstream ss;
        write_trace(trace, ss);
        write_file(trace_path, ss.str());
      }
      const std::string final_text = serialize_metagrammar(trace.final);
      if (!output_path.empty()) write_file(output_path, final_text);
      out << final_text;
    } else if (*eval || *report) {
      auto metas = corpus_opts.scan(err);
      if (holdout_only) {
        if (per_category == 0) throw UsageError("--per-category must be positive");
        metas = stratified_sample(metas, per_category, seed).holdout;
      }
      const auto benchmarks = load_benchmarks(corpus_opts.corpus, metas);
      if (benchmarks.empty()) throw UsageError("no parseable benchmarks");
      const auto sorts = corpus_sorts(benchmarks);
      const std::vector<Metagrammar> candidates{resolve(baseline_spec, sorts), resolve(metagrammar_spec, sorts)};
      auto cache = solver_opts.open_cache();
      Evaluator evaluator(solver_opts.spec(), solver_opts.limits(), solver_opts.mode(), cache.get());
      if (*report) {
        // Serve everything from the cache; a miss means the runs were never made.
        for (const auto& m : candidates) {
          for (const auto& b : benchmarks) {
            const auto key = cache_key(b.id, m.digest(), evaluator.solver().id(), evaluator.limits().timeout_seconds,
                                       evaluator.cost_mode());
            if (!cache->find(key)) throw UsageError("no cached run of " + m.id() + " on " + b.id);
          }
        }
      }
      const auto outcomes = evaluator.evaluate(candidates, benchmarks);
      const Report rep = make_report(candidates[1].id(), to_results(benchmarks, outcomes[1]), candidates[0].id(),
                                     to_results(benchmarks, outcomes[0]));
      out << render_text(rep);
      if (!csv_path.empty()) write_file(csv_path, render_csv(rep));
      err << "solver invocations: " << evaluator.invocations() << "\n";
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MaterializeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace mg
