#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mg/term.hpp"

namespace mg {

/// A production whose right-hand side is a single variable or literal.
struct TerminalProduction {
  Term term;
  friend bool operator==(const TerminalProduction&, const TerminalProduction&) = default;
};

/// A production `(op N1 ... Nk)` over nonterminal names.
struct OperatorProduction {
  Op op;
  std::vector<std::string> operands;
  friend bool operator==(const OperatorProduction&, const OperatorProduction&) = default;
};

using Production = std::variant<TerminalProduction, OperatorProduction>;

struct Nonterminal {
  std::string name;
  Sort sort;
  std::vector<Production> productions;
  friend bool operator==(const Nonterminal&, const Nonterminal&) = default;
};

/// A concrete SyGuS grammar. The first nonterminal is the start symbol, as
/// in the SyGuS-IF v2 grammar block.
class Grammar {
 public:
  Grammar() = default;

  /// Validates nonterminal uniqueness, operand references and production sorts.
  explicit Grammar(std::vector<Nonterminal> nonterminals);

  const std::vector<Nonterminal>& nonterminals() const { return nonterminals_; }
  const Nonterminal& start() const { return nonterminals_.front(); }
  const Nonterminal* find(const std::string& name) const;
  bool empty() const { return nonterminals_.empty(); }

  /// Total number of productions over all nonterminals.
  std::size_t production_count() const;

  /// True if `t` can be derived from the start symbol.
  bool derives(const Term& t) const;
  bool derives(const std::string& nonterminal, const Term& t) const;

  friend bool operator==(const Grammar&, const Grammar&) = default;

 private:
  std::vector<Nonterminal> nonterminals_;
};

/// Canonical production order: variables by name, literals by value, then
/// operators by (name, operands).
bool production_less(const Production& a, const Production& b);

}  // namespace mg
