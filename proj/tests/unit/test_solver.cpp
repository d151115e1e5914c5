#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "../support/random_spec.hpp"
#include "mg/errors.hpp"
#include "mg/metagrammar.hpp"
#include "mg/parser.hpp"
#include "mg/printer.hpp"
#include "mg/solver.hpp"
#include "mg/subprocess.hpp"

using namespace mg;

namespace {

const char* kDouble =
    "(set-logic BV)(synth-fun f ((a (_ BitVec 4))) (_ BitVec 4))(declare-var a (_ BitVec 4))"
    "(constraint (= (f a) (bvadd a a)))(check-synth)";

Grammar grammar_of(const SynthProblem& p, std::vector<Production> prods) {
  return Grammar({Nonterminal{"Start", p.target.return_sort, std::move(prods)}});
}

Term var(const char* n) { return Term::variable(n, Sort::bitvec(4)); }

RunLimits quick_limits() {
  RunLimits l;
  l.timeout_seconds = 5;
  l.max_parallel = 4;
  l.grace_seconds = 1;
  return l;
}

}  // namespace

TEST_CASE("verify examples") {
  const SynthProblem p = parse_problem(kDouble);
  const Term a = var("a");
  const VerifyResult wrong = verify(a, p);
  CHECK_FALSE(wrong.ok);
  CHECK(wrong.counterexample.at("a").bits == 1);
  CHECK(verify(Term::apply(Op::BvAdd, {a, a}), p).ok);
  CHECK(verify(Term::apply(Op::BvShl, {a, Term::literal(Sort::bitvec(4), 1)}), p).ok);
}

TEST_CASE("verify rejects input spaces that are too large") {
  const SynthProblem p = parse_problem(
      "(set-logic BV)(synth-fun f ((a (_ BitVec 16))) (_ BitVec 16))(declare-var a (_ BitVec 16))"
      "(declare-var b (_ BitVec 8))(constraint (= (f a) a))(check-synth)");
  CHECK_FALSE(exhaustively_checkable(p));
  CHECK_THROWS_AS(verify(Term::variable("a", Sort::bitvec(16)), p), std::invalid_argument);
}

TEST_CASE("builtin solves the doubling spec") {
  const SynthProblem p = parse_problem(kDouble);
  const Grammar g = materialize(default_metagrammar(p.signature_sorts()), p);
  const SolveOutcome o = solve(p, g, SolverSpec::builtin(), quick_limits());
  REQUIRE(o.solved());
  CHECK(verify(*o.solution, p).ok);
  CHECK(g.derives(*o.solution));
}

TEST_CASE("identity spec is solved by the first candidate") {
  const SynthProblem p = parse_problem(
      "(set-logic BV)(synth-fun f ((a (_ BitVec 4))) (_ BitVec 4))(declare-var a (_ BitVec 4))"
      "(constraint (= (f a) a))(check-synth)");
  const Grammar g = grammar_of(p, {TerminalProduction{var("a")}, OperatorProduction{Op::BvAdd, {"Start", "Start"}}});
  const SolveOutcome o = enumerate_solve(p, g, 6, 10000);
  REQUIRE(o.solved());
  CHECK(print_term(*o.solution) == "a");
  CHECK(o.cost == 1);
}

TEST_CASE("grammar without operators is infeasible for doubling") {
  const SynthProblem p = parse_problem(kDouble);
  const SolveOutcome o = enumerate_solve(p, grammar_of(p, {TerminalProduction{var("a")}}), 3, 10000);
  CHECK(o.status == SolveStatus::Infeasible);
}

TEST_CASE("contradictory spec is infeasible within budget") {
  const SynthProblem p = parse_problem(
      "(set-logic BV)(synth-fun f ((a (_ BitVec 4))) (_ BitVec 4))(declare-var a (_ BitVec 4))"
      "(constraint (= (f a) (bvadd a #x1)))(constraint (= (f a) a))(check-synth)");
  const Grammar g = materialize(default_metagrammar(p.signature_sorts()), p);
  const SolveOutcome o = enumerate_solve(p, g, 5, 200000);
  CHECK(o.status == SolveStatus::Infeasible);
}

TEST_CASE("builtin cost and solution are deterministic") {
  const SynthProblem p = parse_problem(
      "(set-logic BV)(synth-fun f ((a (_ BitVec 4)) (b (_ BitVec 4))) (_ BitVec 4))(declare-var a (_ BitVec 4))"
      "(declare-var b (_ BitVec 4))(constraint (= (f a b) (ite (bvult a b) b a)))(check-synth)");
  const Grammar g = materialize(default_metagrammar(p.signature_sorts()), p);
  const SolveOutcome x = enumerate_solve(p, g, 8, 2'000'000);
  const SolveOutcome y = enumerate_solve(p, g, 8, 2'000'000);
  REQUIRE(x.solved());
  CHECK(x.cost == y.cost);
  CHECK(*x.solution == *y.solution);
}

TEST_CASE("points mode handles constant and nested calls") {
  const SynthProblem p = parse_problem(
      "(set-logic BV)(synth-fun inc ((x (_ BitVec 4))) (_ BitVec 4))(declare-var x (_ BitVec 4))"
      "(constraint (= (inc (inc x)) (bvadd x #x2)))(constraint (= (inc #x0) #x1))(check-synth)");
  const Grammar g = materialize(default_metagrammar(p.signature_sorts()), p);
  const SolveOutcome o = enumerate_solve(p, g, 6, 1'000'000);
  REQUIRE(o.solved());
  CHECK(verify(*o.solution, p).ok);
}

TEST_CASE("PBE spec is solved") {
  const SynthProblem p = parse_problem(
      "(set-logic BV)(synth-fun g ((s (_ BitVec 8))) (_ BitVec 8))(constraint (= (g #x00) #x01))"
      "(constraint (= (g #x01) #x02))(constraint (= (g #xff) #x00))(check-synth)");
  const Grammar g = materialize(default_metagrammar(p.signature_sorts()), p);
  const SolveOutcome o = solve(p, g, SolverSpec::builtin(), quick_limits());
  REQUIRE(o.solved());
  CHECK(verify(*o.solution, p).ok);
}

TEST_CASE("Bool target") {
  const SynthProblem p = parse_problem(
      "(set-logic BV)(synth-fun z ((v (_ BitVec 4))) Bool)(declare-var v (_ BitVec 4))"
      "(constraint (= (z v) (= v #x0)))(check-synth)");
  const Grammar g = materialize(default_metagrammar(p.signature_sorts()), p);
  const SolveOutcome o = solve(p, g, SolverSpec::builtin(), quick_limits());
  REQUIRE(o.solved());
  CHECK(verify(*o.solution, p).ok);
}

TEST_CASE("solver specs") {
  CHECK_THROWS_AS(SolverSpec::external("solver"), std::invalid_argument);
  CHECK_THROWS_AS(SolverSpec::external("solver {input} {input}"), std::invalid_argument);
  CHECK(SolverSpec::builtin(5, 100).id() == "builtin:size=5:cands=100");
  RunLimits bad;
  bad.max_parallel = 0;
  CHECK_THROWS(bad.validate());
  CHECK(status_from_string(to_string(SolveStatus::Infeasible)) == SolveStatus::Infeasible);
}

TEST_CASE("subprocess runner") {
  const ProcessResult ok = run_process("printf hello", 5);
  CHECK(ok.exit_code == 0);
  CHECK(ok.out == "hello");
  const ProcessResult fail = run_process("exit 3", 5);
  CHECK(fail.exit_code == 3);
  const auto t0 = std::chrono::steady_clock::now();
  const ProcessResult slow = run_process("sleep 30", 1, 1);
  CHECK(slow.timed_out);
  CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(5));
  CHECK(shell_quote("a'b") == "'a'\\''b'");
}

TEST_CASE("external solver paths") {
  const SynthProblem p = parse_problem(kDouble);
  const Grammar g = materialize(default_metagrammar(p.signature_sorts()), p);
  CHECK(solve(p, g, SolverSpec::external("false {input}"), quick_limits()).status == SolveStatus::Error);
  const SolveOutcome good = solve(
      p, g, SolverSpec::external("cat {input} >/dev/null; echo '(define-fun f ((a (_ BitVec 4))) (_ BitVec 4) (bvadd a a))'"),
      quick_limits());
  REQUIRE(good.solved());
  CHECK(print_term(*good.solution) == "(bvadd a a)");
  const SolveOutcome wrong =
      solve(p, g, SolverSpec::external("echo '(define-fun f ((a (_ BitVec 4))) (_ BitVec 4) a)' # {input}"),
            quick_limits());
  CHECK(wrong.status == SolveStatus::Error);
  CHECK(solve(p, g, SolverSpec::external("echo infeasible # {input}"), quick_limits()).status ==
        SolveStatus::Infeasible);
  RunLimits tight = quick_limits();
  tight.timeout_seconds = 1;
  CHECK(solve(p, g, SolverSpec::external("sleep 20 # {input}"), tight).status == SolveStatus::Timeout);
}

TEST_CASE("external solver receives the grammar-annotated problem") {
  const SynthProblem p = parse_problem(kDouble);
  const Grammar g = materialize(default_metagrammar(p.signature_sorts()), p);
  const auto dir = std::filesystem::temp_directory_path() / ("mg_ext_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto copy = dir / "seen.sl";
  solve(p, g, SolverSpec::external("cp {input} " + shell_quote(copy.string())), quick_limits());
  std::ifstream in(copy);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == print_problem(p.with_grammar(g)));
  std::filesystem::remove_all(dir);
}

TEST_CASE("run_batch preserves order and isolates failures") {
  const SynthProblem p = parse_problem(kDouble);
  const Grammar g = materialize(default_metagrammar(p.signature_sorts()), p);
  std::vector<SolveJob> jobs;
  for (int i = 0; i < 40; ++i) jobs.push_back({p, g, SolverSpec::builtin()});
  RunLimits limits = quick_limits();
  limits.max_parallel = 20;
  const auto out = run_batch(jobs, limits);
  REQUIRE(out.size() == 40);
  for (const auto& o : out) CHECK(o.solved());

  std::vector<SolveJob> mixed{{p, g, SolverSpec::builtin()},
                              {p, g, SolverSpec::external("sleep 20 # {input}")},
                              {p, g, SolverSpec::external("false {input}")}};
  limits.max_parallel = 1;
  limits.timeout_seconds = 1;
  const auto res = run_batch(mixed, limits);
  REQUIRE(res.size() == 3);
  CHECK(res[0].solved());
  CHECK(res[1].status == SolveStatus::Timeout);
  CHECK(res[2].status == SolveStatus::Error);
}

TEST_CASE("property: solved outcomes on random specs verify") {
  std::mt19937_64 rng(2024);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::string text = testing::random_spec(rng);
    INFO(text);
    const SynthProblem p = parse_problem(text);
    const Grammar g = materialize(default_metagrammar(p.signature_sorts()), p);
    const SolveOutcome o = enumerate_solve(p, g, 5, 100'000);
    if (o.solved()) {
      ++solved;
      CHECK(verify(*o.solution, p).ok);
      CHECK(g.derives(*o.solution));
    }
  }
  CHECK(solved > 10);
}

TEST_CASE("property: a larger grammar solves what a smaller one solves") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const SynthProblem p = parse_problem(testing::random_spec(rng, 4));
    const auto full = default_metagrammar(p.signature_sorts());
    const Metagrammar small("small", {*full.find("args"), *full.find("const01"), *full.find("bv-arith")});
    const SolveOutcome a = enumerate_solve(p, materialize(small, p), 4, 1'000'000);
    if (!a.solved()) continue;
    const SolveOutcome b = enumerate_solve(p, materialize(full, p), 4, 10'000'000);
    CHECK(b.solved());
  }
}
