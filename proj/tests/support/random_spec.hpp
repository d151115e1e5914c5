#pragma once

#include <random>
#include <string>
#include <vector>

#include "mg/parser.hpp"
#include "mg/printer.hpp"

namespace mg::testing {

// Random bitvector term of at most `size` nodes over the given variables.
inline Term random_bv_term(std::mt19937_64& rng, const std::vector<Term>& vars, unsigned width, std::size_t size) {
  const Sort s = Sort::bitvec(width);
  if (size <= 1 || rng() % 4 == 0) {
    if (rng() % 3 == 0) return Term::literal(s, rng() & s.mask());
    return vars[rng() % vars.size()];
  }
  static const Op unary[] = {Op::BvNot, Op::BvNeg};
  static const Op binary[] = {Op::BvAnd, Op::BvOr,   Op::BvXor, Op::BvAdd,  Op::BvSub,  Op::BvMul,
                              Op::BvUdiv, Op::BvUrem, Op::BvShl, Op::BvLshr, Op::BvAshr};
  static const Op preds[] = {Op::Eq, Op::BvUlt, Op::BvUle, Op::BvSlt, Op::BvSle};
  const std::size_t budget = size - 1;
  const auto pick = rng() % 10;
  if (pick < 2 || budget < 2) return Term::apply(unary[rng() % 2], {random_bv_term(rng, vars, width, budget)});
  if (pick < 8 || budget < 5) {
    const std::size_t left = 1 + rng() % (budget - 1);
    return Term::apply(binary[rng() % std::size(binary)],
                       {random_bv_term(rng, vars, width, left), random_bv_term(rng, vars, width, budget - left)});
  }
  const Term cond = Term::apply(preds[rng() % std::size(preds)], {vars[rng() % vars.size()], vars[rng() % vars.size()]});
  const std::size_t rest = budget - 3;
  const std::size_t left = 1 + rng() % (rest - 1);
  return Term::apply(Op::Ite, {cond, random_bv_term(rng, vars, width, left), random_bv_term(rng, vars, width, rest - left)});
}

// Random specification text: f over 1-2 arguments of width 1-4, constrained to
// equal a random term, or (sometimes) only bounded by it.
inline std::string random_spec(std::mt19937_64& rng, std::size_t max_term_size = 5) {
  const unsigned width = 1 + rng() % 4;
  const std::size_t arity = 1 + rng() % 2;
  const Sort s = Sort::bitvec(width);
  std::vector<Term> vars;
  std::string params, decls, call = "(f";
  for (std::size_t i = 0; i < arity; ++i) {
    const std::string name = std::string(1, static_cast<char>('a' + i));
    vars.push_back(Term::variable(name, s));
    params += "(" + name + " " + print_sort(s) + ")";
    decls += "(declare-var " + name + " " + print_sort(s) + ")\n";
    call += " " + name;
  }
  call += ")";
  const std::string body = print_term(random_bv_term(rng, vars, width, 1 + rng() % max_term_size));
  std::string constraint;
  switch (rng() % 4) {
    case 0: constraint = "(bvuge " + call + " " + body + ")"; break;
    case 1: constraint = "(or (= " + call + " " + body + ") (= " + call + " " + print_term(vars[0]) + "))"; break;
    default: constraint = "(= " + call + " " + body + ")"; break;
  }
  return "(set-logic BV)\n(synth-fun f (" + params + ") " + print_sort(s) + ")\n" + decls + "(constraint " +
         constraint + ")\n(check-synth)\n";
}

}  // namespace mg::testing
