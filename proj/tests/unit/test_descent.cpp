#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mg/corpus.hpp"
#include "mg/descent.hpp"
#include "mg/parser.hpp"

using namespace mg;

namespace {

ScoreContext context(const std::vector<std::pair<bool, double>>& runs) {
  std::vector<ComparisonMember> members;
  for (std::size_t i = 0; i < runs.size(); ++i) members.push_back({"m" + std::to_string(i), runs[i].first, runs[i].second});
  return ScoreContext::build("b", members);
}

// Direct transcription of the normalized score for one member, used as an oracle.
double oracle_score(const std::vector<std::pair<bool, double>>& runs, std::size_t m) {
  if (!runs[m].first) return 10.0;
  std::vector<double> solved;
  std::vector<double> others;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!runs[i].first) continue;
    solved.push_back(runs[i].second);
    if (i != m) others.push_back(runs[i].second);
  }
  if (others.empty()) return 0.0;
  double mu_all = 0;
  for (double r : solved) mu_all += r;
  mu_all /= static_cast<double>(solved.size());
  double var = 0;
  for (double r : solved) var += (r - mu_all) * (r - mu_all);
  const double sigma = std::sqrt(var / static_cast<double>(solved.size()));
  if (sigma == 0) return 0.0;
  double mu = 0;
  for (double r : others) mu += r;
  mu /= static_cast<double>(others.size());
  return (runs[m].second - mu) / sigma;
}

std::vector<Benchmark> descent_corpus() {
  const std::string root = std::string(MG_TEST_DATA_DIR) + "/descent";
  return load_benchmarks(root, scan_corpus(root, load_manifest(root + "/manifest.csv")));
}

SearchConfig deterministic() {
  SearchConfig cfg;
  cfg.cost_mode = CostMode::DeterministicCost;
  cfg.limits.max_parallel = 4;
  return cfg;
}

}  // namespace

TEST_CASE("score examples") {
  const auto ctx = context({{true, 2.0}, {true, 4.0}, {true, 6.0}});
  CHECK(score_benchmark("m0", ctx) == doctest::Approx(-3.0 / std::sqrt(8.0 / 3.0)).epsilon(1e-12));
  CHECK(score_benchmark("m0", context({{false, 0.0}, {true, 1.0}})) == 10.0);
  CHECK(score_benchmark("m0", context({{true, 3.0}, {true, 3.0}, {true, 3.0}})) == 0.0);
  CHECK(score_benchmark("m0", context({{true, 3.0}, {false, 0.0}})) == 0.0);
  CHECK(score_benchmark("m0", context({{false, 0.0}}), 7.5) == 7.5);
  CHECK_THROWS(score_benchmark("nope", ctx));
}

TEST_CASE("aggregate examples") {
  const std::vector<double> s{-1.0, 10.0, 0.5};
  CHECK(score_metagrammar(s) == doctest::Approx(9.5));
  CHECK(score_metagrammar(s, Aggregate::Mean) == doctest::Approx(3.1666666667));
  CHECK(score_metagrammar(std::vector<double>(5, 10.0)) == 50.0);
  CHECK_THROWS_AS(score_metagrammar(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("property: scores match the oracle, are scale-invariant and antisymmetric") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> runtime(0.1, 100.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::pair<bool, double>> runs;
    const std::size_t n = 1 + rng() % 8;
    for (std::size_t i = 0; i < n; ++i) runs.push_back({rng() % 4 != 0, runtime(rng)});
    const double c = runtime(rng);
    auto scaled = runs;
    for (auto& r : scaled) r.second *= c;
    const auto ctx = context(runs);
    const auto sctx = context(scaled);
    for (std::size_t m = 0; m < n; ++m) {
      const std::string id = "m" + std::to_string(m);
      const double s = score_benchmark(id, ctx);
      CHECK(s == doctest::Approx(oracle_score(runs, m)).epsilon(1e-9));
      CHECK(score_benchmark(id, sctx) == doctest::Approx(s).epsilon(1e-9));
      if (!runs[m].first) continue;
      bool fastest = true, slowest = true;
      std::size_t others = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == m || !runs[i].first) continue;
        ++others;
        fastest = fastest && runs[m].second < runs[i].second;
        slowest = slowest && runs[m].second > runs[i].second;
      }
      if (others > 0 && fastest) CHECK(s < 0);
      if (others > 0 && slowest) CHECK(s > 0);
    }
  }
}

TEST_CASE("select_final examples") {
  auto candidate = [](std::string id, std::size_t solved, double mean) {
    CandidateResult c;
    c.metagrammar = Metagrammar(std::move(id), {});
    c.solved = solved;
    c.mean_runtime = mean;
    return c;
  };
  std::vector<CandidateResult> a{candidate("start", 8, 1.0), candidate("l1", 9, 5.0), candidate("l2", 10, 9.0)};
  CHECK(select_final(a).metagrammar.id() == "l2");
  std::vector<CandidateResult> b{candidate("start", 5, 80.0), candidate("l1", 5, 50.0)};
  CHECK(select_final(b).metagrammar.id() == "l1");
  std::vector<CandidateResult> c{candidate("start", 3, 10.0), candidate("l1", 0, INFINITY)};
  CHECK(select_final(c).metagrammar.id() == "start");
  std::vector<CandidateResult> tie{candidate("start", 3, 10.0), candidate("l1", 3, 10.0)};
  CHECK(select_final(tie).metagrammar.id() == "start");
}

TEST_CASE("descend from a single rule stops after one level") {
  const auto training = descent_corpus();
  const auto full = default_metagrammar({Sort::bitvec(4)});
  const Metagrammar one("one", {*full.find("args")});
  const SearchTrace t = descend(one, training, SolverSpec::builtin(6, 100000), deterministic());
  REQUIRE(t.levels.size() == 1);
  REQUIRE(t.levels[0].candidates.size() == 2);
  CHECK(t.levels[0].candidates[1].metagrammar.empty());
  CHECK(t.levels[0].candidates[1].solved == 0);
  CHECK(t.levels[0].candidates[1].aggregate == 10.0 * static_cast<double>(training.size()));
  CHECK(t.final == one);
}

TEST_CASE("descend on three rules evaluates parent plus neighbors") {
  const auto training = descent_corpus();
  const auto full = default_metagrammar({Sort::bitvec(4)});
  const Metagrammar three("three", {*full.find("args"), *full.find("bv-arith"), *full.find("bv-shifts")});
  ResultsCache cache;
  const SearchTrace t = descend(three, training, SolverSpec::builtin(6, 100000), deterministic(), &cache);
  REQUIRE(!t.levels.empty());
  CHECK(t.levels.size() <= 3);
  CHECK(t.levels[0].candidates.size() == 4);
  CHECK(t.levels[0].solver_invocations == 4 * training.size());
  // Level 1's chosen candidate is re-evaluated as level 2's parent from the cache.
  if (t.levels.size() > 1) {
    CHECK(t.levels[1].cache_hits >= training.size());
    CHECK(t.levels[1].solver_invocations + t.levels[1].cache_hits == t.levels[1].candidates.size() * training.size());
  }
  for (std::size_t l = 1; l < t.levels.size(); ++l) CHECK(t.levels[l].parent.size() + 1 == t.levels[l - 1].parent.size());
  CHECK(t.levels[0].chosen_result().metagrammar.id() == "three~bv-shifts");
}

TEST_CASE("descend rejects bad input") {
  const auto training = descent_corpus();
  CHECK_THROWS(descend(Metagrammar("e", {}), training, SolverSpec::builtin(), deterministic()));
  CHECK_THROWS(descend(default_metagrammar({Sort::bitvec(4)}), {}, SolverSpec::builtin(), deterministic()));
}

TEST_CASE("trace serialization") {
  const auto training = descent_corpus();
  const auto full = default_metagrammar({Sort::bitvec(4)});
  const Metagrammar two("two", {*full.find("args"), *full.find("bv-arith")});
  const SearchTrace t = descend(two, training, SolverSpec::builtin(5, 50000), deterministic());
  std::ostringstream a, b;
  write_trace(t, a);
  write_trace(descend(two, training, SolverSpec::builtin(5, 50000), deterministic()), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("{\"type\":\"search\"", 0) == 0);
  CHECK(a.str().find("\"type\":\"final\"") != std::string::npos);
  CHECK(a.str().find("runtime_seconds") == std::string::npos);
}
