#pragma once

#include <map>
#include <span>
#include <string>

#include "mg/problem.hpp"

namespace mg {

using Env = std::map<std::string, Value>;

/// Evaluates `t` under standard SMT-LIB BV/Bool semantics.
///
/// Applications of `candidate->name()` use the candidate body; other calls
/// resolve against `helpers`. Throws EvalError on unbound symbols or arity
/// mismatches.
Value eval_term(const Term& t, const Env& env, std::span<const FunctionDef> helpers = {},
                const FunctionDef* candidate = nullptr);

/// Replaces calls to helper functions by their bodies (recursively).
Term inline_helpers(const Term& t, std::span<const FunctionDef> helpers);

/// Capture-free substitution of variables by terms.
Term substitute(const Term& t, const std::map<std::string, Term>& bindings);

}  // namespace mg
