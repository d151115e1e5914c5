#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mg/grammar.hpp"
#include "mg/term.hpp"

namespace mg {

struct Param {
  std::string name;
  Sort sort;
  friend bool operator==(const Param&, const Param&) = default;
};

struct FunctionSignature {
  std::string name;
  std::vector<Param> params;
  Sort return_sort = Sort::boolean();

  friend bool operator==(const FunctionSignature&, const FunctionSignature&) = default;
};

/// A function with a body: a `define-fun` helper, or a candidate solution.
struct FunctionDef {
  FunctionSignature signature;
  Term body;

  const std::string& name() const { return signature.name; }
  friend bool operator==(const FunctionDef&, const FunctionDef&) = default;
};

struct SynthProblem {
  std::string logic;
  FunctionSignature target;
  std::vector<Param> universal_vars;
  std::vector<FunctionDef> helper_defs;
  std::vector<Term> constraints;
  std::optional<Grammar> attached_grammar;

  const FunctionDef* find_helper(const std::string& name) const;

  /// Distinct sorts of the target's parameters and return value.
  std::set<Sort> signature_sorts() const;

  SynthProblem with_grammar(Grammar g) const {
    SynthProblem copy = *this;
    copy.attached_grammar = std::move(g);
    return copy;
  }

  friend bool operator==(const SynthProblem&, const SynthProblem&) = default;
};

/// Deduplicated literals occurring in constraints and helper bodies.
std::set<Literal> extract_literals(const SynthProblem& p);

/// Checks the cross-field invariants (free variables, applied symbols,
/// constraint sorts, distinct parameter names). Throws TypeError.
void validate(const SynthProblem& p);

}  // namespace mg
