#pragma once

#include <string>

#include "mg/grammar.hpp"
#include "mg/problem.hpp"

namespace mg {

std::string print_sort(const Sort& s);

/// Widths of 8 or more that are divisible by 4 print as `#x..`, others as
/// `#b..`, zero-padded.
std::string print_literal(const Sort& s, std::uint64_t value);

std::string print_term(const Term& t);
std::string print_production(const Production& p);

/// The SyGuS-IF v2 grammar block: predeclaration list followed by grouped rules.
std::string print_grammar(const Grammar& g, const std::string& indent = "  ");

/// Command order: set-logic, define-fun*, synth-fun, declare-var*, constraint*, check-synth.
std::string print_problem(const SynthProblem& p);

std::string print_function_def(const FunctionDef& f);

}  // namespace mg
