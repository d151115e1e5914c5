#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "mg/cache.hpp"
#include "mg/cli.hpp"
#include "mg/corpus.hpp"
#include "mg/report.hpp"

using namespace mg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = fs::temp_directory_path() / ("mg_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

std::string spec(int k) {
  return "(set-logic BV)(synth-fun f ((a (_ BitVec 4))) (_ BitVec 4))(declare-var a (_ BitVec 4))"
         "(constraint (= (f a) (bvadd a #x" +
         std::to_string(k % 10) + ")))(check-synth)\n";
}

std::vector<BenchmarkMeta> fake_metas(const std::map<std::string, int>& sizes) {
  std::vector<BenchmarkMeta> out;
  for (const auto& [cat, n] : sizes) {
    for (int i = 0; i < n; ++i) out.push_back({cat + std::to_string(i), cat + "/" + std::to_string(i) + ".sl", cat});
  }
  return out;
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("scan_corpus") {
  TempDir dir("scan");
  for (int i = 0; i < 5; ++i) write(dir.path / ("sub/b" + std::to_string(i) + ".sl"), spec(i));
  write(dir.path / "bad.sl", "(set-logic BV)(synth-fun");
  write(dir.path / "int.sl", "(set-logic LIA)(synth-fun f ((x Int)) Int)(check-synth)");
  write(dir.path / "notes.txt", "ignored");
  write(dir.path / "m.csv", "path,category\nsub/b0.sl,alpha\nsub/b1.sl,beta\n");
  const auto metas = scan_corpus(dir.path, load_manifest(dir.path / "m.csv"));
  REQUIRE(metas.size() == 7);
  CHECK(metas[0].path == "bad.sl");
  CHECK(metas[0].parse_status == ParseStatus::Error);
  CHECK(metas[1].path == "int.sl");
  CHECK(metas[1].parse_status == ParseStatus::Unsupported);
  CHECK(metas[2].category == "alpha");
  CHECK(metas[3].category == "beta");
  CHECK(metas[4].category == "uncategorized");
  const auto again = scan_corpus(dir.path);
  for (std::size_t i = 0; i < metas.size(); ++i) CHECK(again[i].id == metas[i].id);
  write(dir.path / "crlf.sl", "(set-logic BV)\r\n");
  write(dir.path / "lf.sl", "(set-logic BV)\n");
  const auto hashed = scan_corpus(dir.path);
  REQUIRE(hashed[1].path == "crlf.sl");
  REQUIRE(hashed[3].path == "lf.sl");
  CHECK(hashed[1].id == hashed[3].id);

  TempDir empty("empty");
  CHECK(scan_corpus(empty.path).empty());
  CHECK_THROWS(scan_corpus(empty.path / "missing"));
}

TEST_CASE("stratified_sample") {
  const auto metas = fake_metas({{"a", 100}, {"b", 100}, {"c", 100}});
  const Split s = stratified_sample(metas, 48, 1);
  CHECK(s.training.size() == 144);
  CHECK(s.holdout.size() == 156);
  std::map<std::string, int> per;
  for (const auto& m : s.training) ++per[m.category];
  CHECK(per == std::map<std::string, int>{{"a", 48}, {"b", 48}, {"c", 48}});
  std::set<std::string> seen;
  for (const auto& m : s.training) seen.insert(m.id);
  for (const auto& m : s.holdout) CHECK(seen.insert(m.id).second);
  CHECK(seen.size() == 300);

  CHECK(stratified_sample(fake_metas({{"a", 5}, {"b", 5}, {"c", 5}}), 2, 9).training.size() == 6);
  const Split x = stratified_sample(metas, 10, 42);
  const Split y = stratified_sample(metas, 10, 42);
  for (std::size_t i = 0; i < x.training.size(); ++i) CHECK(x.training[i].id == y.training[i].id);
  const Split z = stratified_sample(metas, 10, 43);
  bool differs = false;
  for (std::size_t i = 0; i < x.training.size(); ++i) differs = differs || x.training[i].id != z.training[i].id;
  CHECK(differs);

  const Split short_cat = stratified_sample(fake_metas({{"a", 3}, {"b", 10}}), 5, 0);
  CHECK(short_cat.training.size() == 8);
  CHECK(short_cat.warnings.size() == 1);
  auto with_bad = fake_metas({{"a", 4}});
  with_bad[0].parse_status = ParseStatus::Error;
  const Split skip = stratified_sample(with_bad, 2, 0);
  CHECK(skip.training.size() + skip.holdout.size() == 3);
}

TEST_CASE("report examples") {
  std::vector<BenchmarkResult> base{{"b1", "x", true, 1.0, 1},
                                    {"b2", "x", true, 2.0, 2},
                                    {"b3", "x", false, 0, 0},
                                    {"b4", "y", false, 0, 0}};
  std::vector<BenchmarkResult> cand{{"b1", "x", false, 0, 0},
                                    {"b2", "x", true, 10.0, 3},
                                    {"b3", "x", true, 20.0, 4},
                                    {"b4", "y", true, 30.0, 5}};
  const Report r = make_report("cand", cand, "base", base);
  const ReportRow& total = r.candidate.rows.back();
  CHECK(total.category == "total");
  CHECK(total.solved == 3);
  CHECK(total.unique_vs_baseline == 2);
  CHECK(total.avg_time_seconds == doctest::Approx(20.0));
  CHECK(r.baseline.rows.back().unique_vs_baseline == 1);
  for (const auto* col : {&r.candidate, &r.baseline}) {
    for (const auto& row : col->rows) {
      CHECK(row.solved <= row.total);
      CHECK(row.unique_vs_baseline <= row.solved);
    }
  }
  CHECK(render_text(r).find("20.0s") != std::string::npos);
  CHECK(render_csv(r).rfind("metagrammar,category,total,solved,unique", 0) == 0);
  const Report quoted = make_report("a,b", cand, "base", base);
  CHECK(render_csv(quoted).find("\"a,b\",total,") != std::string::npos);
  cand.pop_back();
  CHECK_THROWS_AS(make_report("cand", cand, "base", base), std::invalid_argument);
}

TEST_CASE("results cache") {
  TempDir dir("cache");
  const fs::path file = dir.path / "c.jsonl";
  RunRecord r;
  r.benchmark_id = "b";
  r.metagrammar_id = "m";
  r.metagrammar_digest = "d";
  r.solver_id = "builtin";
  r.timeout = 300;
  r.cost_mode = CostMode::DeterministicCost;
  r.status = SolveStatus::Solved;
  r.runtime_seconds = 0.125;
  r.cost = 42;
  r.solution_text = "(bvadd a a)";
  r.timestamp = "t";
  {
    ResultsCache c(file);
    c.append(r);
    RunRecord later = r;
    later.cost = 7;
    c.append(later);
    CHECK(c.find(r.key())->cost == 42);
  }
  std::ofstream(file, std::ios::app) << "{\"benchmark_id\":\"torn";
  ResultsCache reloaded(file);
  CHECK(reloaded.size() == 1);
  const auto back = reloaded.find(r.key());
  REQUIRE(back.has_value());
  CHECK(back->to_json_line() == r.to_json_line());
  CHECK(cache_key("b", "d", "builtin", 300, CostMode::WallClock) != r.key());
}

TEST_CASE("cli usage errors") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"parse"}).code == kExitUsage);
  CHECK(cli({"parse", "/nonexistent/x.sl"}).code == kExitUsage);
  CHECK(cli({"run", std::string(MG_TEST_DATA_DIR) + "/roundtrip/01_double.sl", "--timeout", "0"}).code == kExitUsage);
}

TEST_CASE("cli parse, emit and run") {
  const std::string file = std::string(MG_TEST_DATA_DIR) + "/roundtrip/01_double.sl";
  const auto parsed = cli({"parse", file});
  CHECK(parsed.code == 0);
  CHECK(parsed.out.find("(constraint (= (f a) (bvadd a a)))") != std::string::npos);
  const auto emitted = cli({"emit", file, "--metagrammar", "default"});
  CHECK(emitted.code == 0);
  CHECK(emitted.out.find("((Start (_ BitVec 4)) (B Bool))") != std::string::npos);
  const auto ran = cli({"run", file, "--solver", "builtin", "--timeout", "10"});
  CHECK(ran.code == 0);
  const RunRecord rec = RunRecord::from_json_line(ran.out.substr(0, ran.out.find('\n')));
  CHECK(rec.status == SolveStatus::Solved);
  CHECK(rec.solution_text.has_value());
}

TEST_CASE("cli run with an external solver from the environment") {
  const std::string file = std::string(MG_TEST_DATA_DIR) + "/roundtrip/01_double.sl";
  ::unsetenv("MG_SOLVER_CMD");
  CHECK(cli({"run", file, "--solver", "external"}).code == kExitUsage);
  ::setenv("MG_SOLVER_CMD", "echo '(define-fun f ((a (_ BitVec 4))) (_ BitVec 4) (bvshl a #x1))' # {input}", 1);
  const auto ran = cli({"run", file, "--solver", "external", "--timeout", "10"});
  ::unsetenv("MG_SOLVER_CMD");
  REQUIRE(ran.code == 0);
  const RunRecord rec = RunRecord::from_json_line(ran.out.substr(0, ran.out.find('\n')));
  CHECK(rec.status == SolveStatus::Solved);
  CHECK(rec.solution_text == std::optional<std::string>("(bvshl a #b0001)"));
  CHECK(rec.solver_id.rfind("external:", 0) == 0);
}

TEST_CASE("cli sample, train, eval and report") {
  TempDir dir("cli");
  const std::string corpus = std::string(MG_TEST_DATA_DIR) + "/descent";
  const std::string manifest = corpus + "/manifest.csv";
  const auto sampled = cli({"sample", "--corpus", corpus, "--manifest", manifest, "--per-category", "2", "--seed", "3"});
  CHECK(sampled.code == 0);
  CHECK(std::count(sampled.out.begin(), sampled.out.end(), '\n') == 12);
  CHECK(sampled.out.rfind("training,", 0) == 0);

  const std::string final_mg = (dir.path / "final.mg").string();
  const std::string trace = (dir.path / "trace.jsonl").string();
  const std::vector<std::string> solver{"--solver", "builtin", "--max-size", "6", "--max-candidates", "100000",
                                        "--cost-mode", "deterministic_cost", "--jobs", "4"};
  std::vector<std::string> train{"train", "--corpus", corpus, "--manifest", manifest, "--per-category", "2",
                                 "--seed", "1", "--trace", trace, "--output", final_mg};
  train.insert(train.end(), solver.begin(), solver.end());
  const auto trained = cli(train);
  REQUIRE(trained.code == 0);
  CHECK(fs::exists(final_mg));
  CHECK(fs::exists(trace));

  const std::string cache = (dir.path / "cache.jsonl").string();
  std::vector<std::string> eval{"eval", "--corpus", corpus, "--manifest", manifest, "--metagrammar", final_mg,
                                "--cache", cache, "--holdout", "--per-category", "2", "--seed", "1",
                                "--csv", (dir.path / "r.csv").string()};
  eval.insert(eval.end(), solver.begin(), solver.end());
  const auto first = cli(eval);
  REQUIRE(first.code == 0);
  CHECK(first.err.find("solver invocations: 16") != std::string::npos);
  const auto second = cli(eval);
  CHECK(second.out == first.out);
  CHECK(second.err.find("solver invocations: 0") != std::string::npos);
  CHECK(fs::exists(dir.path / "r.csv"));

  std::vector<std::string> report = eval;
  report[0] = "report";
  const auto reported = cli(report);
  CHECK(reported.code == 0);
  CHECK(reported.out == first.out);
  std::vector<std::string> missing = report;
  missing[7] = "enhanced";
  CHECK(cli(missing).code == kExitUsage);
}
