#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mg/ops.hpp"
#include "mg/sort.hpp"

namespace mg {

/// Immutable, shared term DAG node handle. Terms are constructed through the
/// checked factories below, so every Term in the system is well-sorted and
/// respects operator arity.
class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Literal, Apply };

  static Term variable(std::string name, Sort sort);
  static Term literal(Sort sort, std::uint64_t value);
  static Term boolean(bool value) { return literal(Sort::boolean(), value ? 1 : 0); }

  /// Theory operator application; result sort is inferred.
  static Term apply(Op op, std::vector<Term> args);

  /// Application of a user function (target or helper) with a declared result sort.
  static Term call(std::string function, std::vector<Term> args, Sort result);

  Kind kind() const;
  bool is_variable() const { return kind() == Kind::Variable; }
  bool is_literal() const { return kind() == Kind::Literal; }
  bool is_apply() const { return kind() == Kind::Apply; }

  const Sort& sort() const;

  /// Variable name, or callee name for `Op::Call` applications.
  const std::string& name() const;
  std::uint64_t value() const;
  Op op() const;
  std::span<const Term> args() const;

  /// Number of nodes.
  std::size_t size() const;

  /// Identity of the shared node (useful as a cache key).
  const void* id() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// A literal occurrence keyed by (sort, value).
struct Literal {
  Sort sort;
  std::uint64_t value;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

}  // namespace mg
