#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "mg/sort.hpp"

namespace mg {

/// Theory operators of the supported BV/Bool fragment. `Call` marks an
/// application of a user function (the synthesis target or a define-fun).
enum class Op : std::uint8_t {
  BvNot, BvNeg,
  BvAnd, BvOr, BvXor, BvAdd, BvSub, BvMul, BvUdiv, BvUrem, BvShl, BvLshr, BvAshr,
  Ite,
  Eq, Distinct,
  BvUlt, BvUle, BvUgt, BvUge, BvSlt, BvSle,
  Not, And, Or, Xor, Implies,
  Call,
};

enum class OpClass : std::uint8_t {
  BvArith,      // BV^n -> BV of the same width
  BvPredicate,  // BV x BV -> Bool
  Equality,     // T x T (x T...) -> Bool
  Boolean,      // Bool^n -> Bool
  Ite,          // Bool x T x T -> T
  Call,
};

struct OpInfo {
  Op op;
  std::string_view name;
  OpClass cls;
  unsigned min_arity;
  unsigned max_arity;  // 0 means unbounded
};

const OpInfo& op_info(Op op);
std::string_view op_name(Op op);
std::optional<Op> op_from_name(std::string_view name);

/// Every theory operator, in declaration order.
std::span<const OpInfo> all_ops();

bool arity_ok(Op op, std::size_t n);

/// Applies a theory operator to raw operand bits. `operand_width` is the
/// width of the operands (for ite, of the branches). Results are masked to
/// the result width; booleans come back as 0/1.
std::uint64_t apply_bits(Op op, unsigned operand_width, std::span<const std::uint64_t> args);

/// Pointwise `apply_bits` over `count` points. `operands[i]` points at the
/// i-th operand's value vector.
void apply_pointwise(Op op, unsigned operand_width, std::span<const std::uint64_t* const> operands,
                     std::uint64_t* out, std::size_t count);

}  // namespace mg
