#include <doctest.h>

#include <array>
#include <random>

#include "mg/errors.hpp"
#include "mg/eval.hpp"
#include "mg/ops.hpp"
#include "mg/parser.hpp"
#include "mg/printer.hpp"
#include "mg/sexpr.hpp"

using namespace mg;

namespace {

// Reference semantics written from the SMT-LIB definitions, independent of ops.cpp.
std::int64_t as_signed(std::uint64_t v, unsigned w) {
  const std::int64_t half = std::int64_t{1} << (w - 1);
  const auto x = static_cast<std::int64_t>(v);
  return x >= half ? x - 2 * half : x;
}

std::uint64_t reference(Op op, unsigned w, std::uint64_t a, std::uint64_t b) {
  const std::uint64_t mod = std::uint64_t{1} << w;
  switch (op) {
    case Op::BvNot: return mod - 1 - a;
    case Op::BvNeg: return (mod - a) % mod;
    case Op::BvAnd: return a & b;
    case Op::BvOr: return a | b;
    case Op::BvXor: return a ^ b;
    case Op::BvAdd: return (a + b) % mod;
    case Op::BvSub: return (a + mod - b) % mod;
    case Op::BvMul: return (a * b) % mod;
    case Op::BvUdiv: return b == 0 ? mod - 1 : a / b;
    case Op::BvUrem: return b == 0 ? a : a % b;
    case Op::BvShl: return b >= w ? 0 : (a * (std::uint64_t{1} << b)) % mod;
    case Op::BvLshr: return b >= w ? 0 : a / (std::uint64_t{1} << b);
    case Op::BvAshr: {
      const std::int64_t s = as_signed(a, w);
      std::int64_t r = s;
      for (std::uint64_t i = 0; i < std::min<std::uint64_t>(b, w); ++i) r = r < 0 ? (r - 1) / 2 : r / 2;
      return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(mod) : r);
    }
    case Op::BvUlt: return a < b;
    case Op::BvUle: return a <= b;
    case Op::BvUgt: return a > b;
    case Op::BvUge: return a >= b;
    case Op::BvSlt: return as_signed(a, w) < as_signed(b, w);
    case Op::BvSle: return as_signed(a, w) <= as_signed(b, w);
    case Op::Eq: return a == b;
    case Op::Distinct: return a != b;
    default: return 0;
  }
}

const char* kDoubleSpec =
    "(set-logic BV)(synth-fun f ((x (_ BitVec 4))) (_ BitVec 4))(declare-var a (_ BitVec 4))"
    "(constraint (= (f a) (bvadd a a)))(check-synth)";

Value bv(unsigned w, std::uint64_t v) { return {Sort::bitvec(w), v}; }

}  // namespace

TEST_CASE("sorts") {
  CHECK(Sort::bitvec(4) == Sort::bitvec(4));
  CHECK(Sort::bitvec(4) != Sort::bitvec(8));
  CHECK(Sort::boolean() != Sort::bitvec(1));
  CHECK_THROWS_AS(Sort::bitvec(0), TypeError);
  CHECK_THROWS_AS(Sort::bitvec(65), UnsupportedError);
  CHECK(Sort::bitvec(4).mask() == 0xf);
  CHECK(Sort::bitvec(64).mask() == ~std::uint64_t{0});
  CHECK(Sort::bitvec(4).to_string() == "(_ BitVec 4)");
}

TEST_CASE("operator table arities") {
  CHECK(arity_ok(Op::BvNot, 1));
  CHECK_FALSE(arity_ok(Op::BvNot, 2));
  CHECK(arity_ok(Op::BvAdd, 2));
  CHECK_FALSE(arity_ok(Op::BvAdd, 1));
  CHECK(arity_ok(Op::Ite, 3));
  CHECK_FALSE(arity_ok(Op::Ite, 2));
  CHECK(op_from_name("bvlshr") == Op::BvLshr);
  CHECK_FALSE(op_from_name("+").has_value());
}

TEST_CASE("bitvector semantics agree with the reference on all inputs of widths 1 to 5") {
  const std::array ops{Op::BvNot, Op::BvNeg, Op::BvAnd, Op::BvOr,  Op::BvXor, Op::BvAdd, Op::BvSub,
                       Op::BvMul, Op::BvUdiv, Op::BvUrem, Op::BvShl, Op::BvLshr, Op::BvAshr, Op::BvUlt,
                       Op::BvUle, Op::BvUgt, Op::BvUge, Op::BvSlt, Op::BvSle, Op::Eq, Op::Distinct};
  for (unsigned w = 1; w <= 5; ++w) {
    for (Op op : ops) {
      const bool unary = op == Op::BvNot || op == Op::BvNeg;
      for (std::uint64_t a = 0; a < (1u << w); ++a) {
        for (std::uint64_t b = 0; b < (1u << w); ++b) {
          const std::array<std::uint64_t, 2> args{a, b};
          const auto got = apply_bits(op, w, std::span(args).first(unary ? 1 : 2));
          INFO(op_name(op), " w=", w, " a=", a, " b=", b);
          REQUIRE(got == reference(op, w, a, b));
        }
      }
    }
  }
}

TEST_CASE("pointwise application matches scalar application") {
  std::mt19937_64 rng(7);
  for (Op op : {Op::BvAdd, Op::BvAnd, Op::BvOr, Op::BvSub, Op::BvAshr, Op::BvUlt}) {
    std::vector<std::uint64_t> a(64), b(64), out(64);
    for (auto& v : a) v = rng() & 0xff;
    for (auto& v : b) v = rng() & 0xff;
    const std::array<const std::uint64_t*, 2> xs{a.data(), b.data()};
    apply_pointwise(op, 8, xs, out.data(), 64);
    for (std::size_t k = 0; k < 64; ++k) {
      const std::array<std::uint64_t, 2> args{a[k], b[k]};
      CHECK(out[k] == apply_bits(op, 8, args));
    }
  }
}

TEST_CASE("terms check sorts and arities") {
  const Term a = Term::variable("a", Sort::bitvec(4));
  CHECK(Term::apply(Op::BvAdd, {a, a}).sort() == Sort::bitvec(4));
  CHECK(Term::apply(Op::BvUlt, {a, a}).sort() == Sort::boolean());
  CHECK_THROWS_AS(Term::apply(Op::BvNot, {a, a}), TypeError);
  CHECK_THROWS_AS(Term::apply(Op::BvAdd, {a, Term::variable("b", Sort::bitvec(8))}), TypeError);
  CHECK_THROWS_AS(Term::literal(Sort::bitvec(4), 16), TypeError);
  CHECK(Term::apply(Op::BvAdd, {a, a}).size() == 3);
  CHECK(Term::apply(Op::BvAdd, {a, a}) == Term::apply(Op::BvAdd, {a, a}));
}

TEST_CASE("evaluation examples") {
  const Term x = Term::variable("x", Sort::bitvec(4));
  const Term y = Term::variable("y", Sort::bitvec(4));
  const Term one = Term::literal(Sort::bitvec(4), 1);
  const Term ff = Term::literal(Sort::bitvec(4), 0xf);
  CHECK(eval_term(Term::apply(Op::BvAdd, {ff, one}), {}).bits == 0);
  Env env{{"x", bv(4, 5)}, {"y", bv(4, 9)}};
  CHECK(eval_term(Term::apply(Op::Ite, {Term::boolean(true), x, y}), env).bits == 5);
  CHECK(eval_term(Term::apply(Op::BvUdiv, {Term::literal(Sort::bitvec(4), 5), Term::literal(Sort::bitvec(4), 0)}), {})
            .bits == 0xf);
  CHECK(eval_term(Term::apply(Op::BvUrem, {x, Term::literal(Sort::bitvec(4), 0)}), env).bits == 5);
  CHECK_THROWS_AS(eval_term(x, {}), EvalError);
}

TEST_CASE("evaluation of helper and target calls") {
  const SynthProblem p = parse_problem(
      "(set-logic BV)(define-fun dbl ((z (_ BitVec 4))) (_ BitVec 4) (bvadd z z))"
      "(synth-fun f ((a (_ BitVec 4))) (_ BitVec 4))(declare-var a (_ BitVec 4))"
      "(constraint (= (f a) (dbl a)))(check-synth)");
  const Term a = Term::variable("a", Sort::bitvec(4));
  const FunctionDef cand{p.target, Term::apply(Op::BvShl, {a, Term::literal(Sort::bitvec(4), 1)})};
  for (std::uint64_t v = 0; v < 16; ++v) {
    CHECK(eval_term(p.constraints[0], {{"a", bv(4, v)}}, p.helper_defs, &cand).as_bool());
  }
  CHECK_THROWS_AS(eval_term(p.constraints[0], {{"a", bv(4, 1)}}, p.helper_defs, nullptr), EvalError);
  const Term inlined = inline_helpers(p.constraints[0], p.helper_defs);
  CHECK(print_term(inlined) == "(= (f a) (bvadd a a))");
}

TEST_CASE("s-expression reader") {
  const auto xs = read_sexprs("; comment\n(a (b #x0f) |quoted sym| \"str\") #b01");
  REQUIRE(xs.size() == 2);
  CHECK(xs[0].items.size() == 4);
  CHECK(xs[0].items[1].items[1].kind == SExpr::Kind::Hex);
  CHECK(xs[0].items[2].text == "quoted sym");
  CHECK(xs[1].kind == SExpr::Kind::Binary);
  try {
    read_sexprs("(a\n  (b c)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() >= 1);
  }
  CHECK_THROWS_AS(read_sexprs("(a))"), ParseError);
}

TEST_CASE("parse the doubling example") {
  const SynthProblem p = parse_problem(kDoubleSpec);
  CHECK(p.logic == "BV");
  CHECK(p.target.params.size() == 1);
  CHECK(p.constraints.size() == 1);
  CHECK(p.universal_vars.size() == 1);
  CHECK_FALSE(p.attached_grammar.has_value());
}

TEST_CASE("parse errors and unsupported constructs") {
  CHECK_THROWS_AS(parse_problem("(set-logic BV)(synth-fun f ((x (_ BitVec 4))) (_ BitVec 4))"), ParseError);
  CHECK_THROWS_AS(parse_problem("(set-logic LIA)(synth-fun g ((x Int)) Int)(check-synth)"), UnsupportedError);
  CHECK_THROWS_AS(parse_problem("(set-logic BV)(synth-inv inv ((x (_ BitVec 4))))(check-synth)"), UnsupportedError);
  CHECK_THROWS_AS(parse_problem("(set-logic BV)(synth-fun f ((x (BitVec 4))) (BitVec 4))(check-synth)"),
                  UnsupportedError);
  // free variable
  CHECK_THROWS(parse_problem(
      "(set-logic BV)(synth-fun f ((x (_ BitVec 4))) (_ BitVec 4))(constraint (= (f b) b))(check-synth)"));
  // non-Bool constraint
  CHECK_THROWS(parse_problem("(set-logic BV)(synth-fun f ((x (_ BitVec 4))) (_ BitVec 4))(declare-var a (_ BitVec 4))"
                             "(constraint (f a))(check-synth)"));
  CHECK_THROWS_AS(parse_problem("(set-logic BV)(synth-fun f ((x Bool)) Bool)(check-synth)(check-synth)"), ParseError);
}

TEST_CASE("literal printing") {
  CHECK(print_literal(Sort::bitvec(4), 3) == "#b0011");
  CHECK(print_literal(Sort::bitvec(8), 3) == "#x03");
  CHECK(print_literal(Sort::bitvec(3), 5) == "#b101");
  CHECK(print_literal(Sort::bitvec(16), 0xabc) == "#x0abc");
  CHECK(print_literal(Sort::boolean(), 1) == "true");
}

TEST_CASE("round-trip of the doubling example") {
  const SynthProblem p = parse_problem(kDoubleSpec);
  const std::string once = print_problem(p);
  const SynthProblem q = parse_problem(once);
  CHECK(p == q);
  CHECK(print_problem(q) == once);
}

TEST_CASE("extract_literals") {
  const auto lits = extract_literals(parse_problem(
      "(set-logic BV)(synth-fun f ((a (_ BitVec 4))) (_ BitVec 4))(declare-var a (_ BitVec 4))"
      "(constraint (= (f a) (bvadd a #x3)))(constraint (= (f #b0011) #x3))(check-synth)"));
  REQUIRE(lits.size() == 1);
  CHECK(lits.begin()->sort == Sort::bitvec(4));
  CHECK(lits.begin()->value == 3);
  CHECK(extract_literals(parse_problem(kDoubleSpec)).empty());
}

TEST_CASE("solver answers") {
  const SynthProblem p = parse_problem(kDoubleSpec);
  const FunctionDef d = parse_solver_answer("unsat\n(define-fun f ((y (_ BitVec 4))) (_ BitVec 4) (bvadd y y))\n", p);
  CHECK(print_term(d.body) == "(bvadd x x)");
  const FunctionDef wrapped = parse_solver_answer("((define-fun f ((x (_ BitVec 4))) (_ BitVec 4) x))", p);
  CHECK(print_term(wrapped.body) == "x");
  CHECK_THROWS_AS(parse_solver_answer("unknown\n", p), ParseError);
  CHECK_THROWS(parse_solver_answer("(define-fun f ((x (_ BitVec 8))) (_ BitVec 8) x)", p));
}
