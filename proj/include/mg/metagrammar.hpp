#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mg/grammar.hpp"
#include "mg/problem.hpp"

namespace mg {

enum class SortKind { BitVec, Bool };

/// Adds each target parameter to the nonterminal of its sort.
struct ArgumentVariables {
  friend bool operator==(const ArgumentVariables&, const ArgumentVariables&) = default;
};

/// Adds the listed constants (a subset of {0, 1}) to every nonterminal whose
/// sort occurs in the target signature. For Bool, 0/1 are false/true.
struct ZeroOneConstants {
  std::vector<std::uint64_t> values{0, 1};
  friend bool operator==(const ZeroOneConstants&, const ZeroOneConstants&) = default;
};

/// Adds operator productions to every nonterminal of the given sort kind.
struct Operators {
  SortKind sort_kind = SortKind::BitVec;
  std::vector<Op> ops;
  friend bool operator==(const Operators&, const Operators&) = default;
};

/// Adds `(pred N N)` to the Bool nonterminal for every bitvector nonterminal N.
/// Equality predicates fall back to Bool operands when there is no bitvector sort.
struct Predicates {
  std::vector<Op> ops;
  friend bool operator==(const Predicates&, const Predicates&) = default;
};

/// Subset of {true, false, not, and, or} for the Bool nonterminal.
struct BoolCore {
  std::vector<std::string> items;
  friend bool operator==(const BoolCore&, const BoolCore&) = default;
};

/// Adds the literals occurring in the problem, at most `cap` per sort
/// (the smallest values are kept).
struct ConstantsFromSpec {
  std::size_t cap = 64;
  friend bool operator==(const ConstantsFromSpec&, const ConstantsFromSpec&) = default;
};

using RuleKind = std::variant<ArgumentVariables, ZeroOneConstants, Operators, Predicates, BoolCore, ConstantsFromSpec>;

struct Rule {
  std::string id;
  RuleKind kind;

  /// Throws std::invalid_argument if the payload is inconsistent with the kind.
  void validate() const;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// A set of rules kept in canonical (id-sorted) order. Equality compares the
/// rule sets only; the id is a label.
class Metagrammar {
 public:
  Metagrammar() = default;
  Metagrammar(std::string id, std::vector<Rule> rules);

  const std::string& id() const { return id_; }
  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  bool empty() const { return rules_.empty(); }
  bool contains(std::string_view rule_id) const;
  const Rule* find(std::string_view rule_id) const;

  /// Rule ids in canonical order.
  std::vector<std::string> rule_ids() const;

  /// Content fingerprint of the rule set, independent of the id.
  std::string digest() const;

  friend bool operator==(const Metagrammar& a, const Metagrammar& b) { return a.rules_ == b.rules_; }

 private:
  std::string id_;
  std::vector<Rule> rules_;
};

/// The rule set that reproduces a solver-style default grammar for the
/// given sorts, split into operator groups so descent can drop each group.
Metagrammar default_metagrammar(const std::set<Sort>& problem_sorts);

/// default_metagrammar plus the constants-from-spec rule.
Metagrammar enhanced_metagrammar(const std::set<Sort>& problem_sorts);

/// Applies every rule of `m` to `p`.
///
/// Nonterminals: `Start` for the return sort, `BV<w>` for other bitvector
/// widths, `B` for Bool. Productions whose operands can derive no term are
/// dropped, as are nonterminals unreachable from Start. Throws
/// MaterializeError when Start ends up with no productions.
Grammar materialize(const Metagrammar& m, const SynthProblem& p);

/// The smaller neighbors M \ {r_i}, in canonical rule order.
std::vector<Metagrammar> neighbors(const Metagrammar& m);

std::string rule_to_string(const Rule& r);
std::string serialize_metagrammar(const Metagrammar& m);
Metagrammar parse_metagrammar(std::string_view text);

Metagrammar load_metagrammar(const std::string& path);
void save_metagrammar(const Metagrammar& m, const std::string& path);

/// Resolves `default`, `enhanced` or a path to a metagrammar file.
Metagrammar resolve_metagrammar(const std::string& spec, const std::set<Sort>& problem_sorts);

}  // namespace mg
