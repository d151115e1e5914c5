#pragma once

#include <map>
#include <string>
#include <string_view>

#include "mg/problem.hpp"
#include "mg/sexpr.hpp"

namespace mg {

/// Parses a SyGuS-IF v2 problem over the BV/Bool fragment.
///
/// Throws ParseError for malformed text (including a missing check-synth)
/// and UnsupportedError for constructs outside the fragment.
SynthProblem parse_problem(std::string_view text);

/// Parses a term whose free variables are `scope`, whose user functions are
/// the problem's target and helpers.
Term parse_term(std::string_view text, const SynthProblem& context,
                const std::vector<Param>& scope);

/// Parses a sort expression: `Bool` or `(_ BitVec w)`.
Sort parse_sort(const SExpr& e);

/// Extracts the target definition from solver output in SyGuS v2 answer form:
/// `(define-fun f (params) sort body)`, optionally wrapped in one list and
/// preceded by status lines. Throws ParseError when no answer is found.
FunctionDef parse_solver_answer(std::string_view output, const SynthProblem& p);

}  // namespace mg
