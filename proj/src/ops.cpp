#include "mg/ops.hpp"

#include <array>
#include <cassert>
#include <vector>

namespace mg {
namespace {

constexpr std::array kOps = {
    OpInfo{Op::BvNot, "bvnot", OpClass::BvArith, 1, 1},
    OpInfo{Op::BvNeg, "bvneg", OpClass::BvArith, 1, 1},
    OpInfo{Op::BvAnd, "bvand", OpClass::BvArith, 2, 0},
    OpInfo{Op::BvOr, "bvor", OpClass::BvArith, 2, 0},
    OpInfo{Op::BvXor, "bvxor", OpClass::BvArith, 2, 0},
    OpInfo{Op::BvAdd, "bvadd", OpClass::BvArith, 2, 0},
    OpInfo{Op::BvSub, "bvsub", OpClass::BvArith, 2, 2},
    OpInfo{Op::BvMul, "bvmul", OpClass::BvArith, 2, 0},
    OpInfo{Op::BvUdiv, "bvudiv", OpClass::BvArith, 2, 2},
    OpInfo{Op::BvUrem, "bvurem", OpClass::BvArith, 2, 2},
    OpInfo{Op::BvShl, "bvshl", OpClass::BvArith, 2, 2},
    OpInfo{Op::BvLshr, "bvlshr", OpClass::BvArith, 2, 2},
    OpInfo{Op::BvAshr, "bvashr", OpClass::BvArith, 2, 2},
    OpInfo{Op::Ite, "ite", OpClass::Ite, 3, 3},
    OpInfo{Op::Eq, "=", OpClass::Equality, 2, 0},
    OpInfo{Op::Distinct, "distinct", OpClass::Equality, 2, 0},
    OpInfo{Op::BvUlt, "bvult", OpClass::BvPredicate, 2, 2},
    OpInfo{Op::BvUle, "bvule", OpClass::BvPredicate, 2, 2},
    OpInfo{Op::BvUgt, "bvugt", OpClass::BvPredicate, 2, 2},
    OpInfo{Op::BvUge, "bvuge", OpClass::BvPredicate, 2, 2},
    OpInfo{Op::BvSlt, "bvslt", OpClass::BvPredicate, 2, 2},
    OpInfo{Op::BvSle, "bvsle", OpClass::BvPredicate, 2, 2},
    OpInfo{Op::Not, "not", OpClass::Boolean, 1, 1},
    OpInfo{Op::And, "and", OpClass::Boolean, 2, 0},
    OpInfo{Op::Or, "or", OpClass::Boolean, 2, 0},
    OpInfo{Op::Xor, "xor", OpClass::Boolean, 2, 0},
    OpInfo{Op::Implies, "=>", OpClass::Boolean, 2, 0},
};

constexpr OpInfo kCallInfo{Op::Call, "<call>", OpClass::Call, 0, 0};

inline std::uint64_t mask_of(unsigned w) {
  return w >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << w) - 1);
}

inline std::int64_t to_signed(std::uint64_t v, unsigned w) {
  if (w >= 64) return static_cast<std::int64_t>(v);
  const std::uint64_t sign = std::uint64_t{1} << (w - 1);
  return static_cast<std::int64_t>((v ^ sign) - sign);
}

inline std::uint64_t shl(std::uint64_t a, std::uint64_t b, unsigned w) {
  return b >= w ? 0 : (a << b) & mask_of(w);
}

inline std::uint64_t lshr(std::uint64_t a, std::uint64_t b, unsigned w) {
  return b >= w ? 0 : a >> b;
}

inline std::uint64_t ashr(std::uint64_t a, std::uint64_t b, unsigned w) {
  const std::uint64_t m = mask_of(w);
  const bool negative = (a >> (w - 1)) & 1;
  if (b >= w) return negative ? m : 0;
  const std::uint64_t shifted = a >> b;
  return negative ? (shifted | (m & ~(m >> b))) : shifted;
}

// Binary kernel shared by the scalar and pointwise paths.
inline std::uint64_t binary(Op op, std::uint64_t a, std::uint64_t b, unsigned w) {
  const std::uint64_t m = mask_of(w);
  switch (op) {
    case Op::BvAnd: return a & b;
    case Op::BvOr: return a | b;
    case Op::BvXor: return a ^ b;
    case Op::BvAdd: return (a + b) & m;
    case Op::BvSub: return (a - b) & m;
    case Op::BvMul: return (a * b) & m;
    case Op::BvUdiv: return b == 0 ? m : a / b;
    case Op::BvUrem: return b == 0 ? a : a % b;
    case Op::BvShl: return shl(a, b, w);
    case Op::BvLshr: return lshr(a, b, w);
    case Op::BvAshr: return ashr(a, b, w);
    case Op::BvUlt: return a < b;
    case Op::BvUle: return a <= b;
    case Op::BvUgt: return a > b;
    case Op::BvUge: return a >= b;
    case Op::BvSlt: return to_signed(a, w) < to_signed(b, w);
    case Op::BvSle: return to_signed(a, w) <= to_signed(b, w);
    case Op::Eq: return a == b;
    case Op::Distinct: return a != b;
    case Op::And: return (a && b) ? 1 : 0;
    case Op::Or: return (a || b) ? 1 : 0;
    case Op::Xor: return (a != 0) != (b != 0) ? 1 : 0;
    case Op::Implies: return (!a || b) ? 1 : 0;
    default: return 0;
  }
}

}  // namespace

std::span<const OpInfo> all_ops() { return kOps; }

const OpInfo& op_info(Op op) {
  if (op == Op::Call) return kCallInfo;
  return kOps[static_cast<std::size_t>(op)];
}

std::string_view op_name(Op op) { return op_info(op).name; }

std::optional<Op> op_from_name(std::string_view name) {
  for (const auto& info : kOps) {
    if (info.name == name) return info.op;
  }
  return std::nullopt;
}

bool arity_ok(Op op, std::size_t n) {
  const auto& info = op_info(op);
  if (op == Op::Call) return true;
  return n >= info.min_arity && (info.max_arity == 0 || n <= info.max_arity);
}

std::uint64_t apply_bits(Op op, unsigned w, std::span<const std::uint64_t> args) {
  const std::uint64_t m = mask_of(w);
  switch (op) {
    case Op::BvNot: return ~args[0] & m;
    case Op::BvNeg: return (~args[0] + 1) & m;
    case Op::Not: return args[0] ? 0 : 1;
    case Op::Ite: return args[0] ? args[1] : args[2];
    case Op::Eq:
      for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] != args[0]) return 0;
      }
      return 1;
    case Op::Distinct:
      for (std::size_t i = 0; i < args.size(); ++i) {
        for (std::size_t j = i + 1; j < args.size(); ++j) {
          if (args[i] == args[j]) return 0;
        }
      }
      return 1;
    case Op::Implies: {
      // right associative
      std::uint64_t acc = args.back() ? 1 : 0;
      for (std::size_t i = args.size() - 1; i-- > 0;) acc = binary(Op::Implies, args[i], acc, w);
      return acc;
    }
    case Op::Call: return 0;
    default: {
      if (op_info(op).cls == OpClass::BvPredicate) return binary(op, args[0], args[1], w);
      std::uint64_t acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) acc = binary(op, acc, args[i], w);
      return acc;
    }
  }
}

void apply_pointwise(Op op, unsigned w, std::span<const std::uint64_t* const> xs, std::uint64_t* out,
                     std::size_t count) {
  const std::uint64_t m = mask_of(w);
  switch (op) {
    case Op::BvNot:
      for (std::size_t k = 0; k < count; ++k) out[k] = ~xs[0][k] & m;
      return;
    case Op::BvNeg:
      for (std::size_t k = 0; k < count; ++k) out[k] = (~xs[0][k] + 1) & m;
      return;
    case Op::Not:
      for (std::size_t k = 0; k < count; ++k) out[k] = xs[0][k] ? 0 : 1;
      return;
    case Op::Ite:
      for (std::size_t k = 0; k < count; ++k) out[k] = xs[0][k] ? xs[1][k] : xs[2][k];
      return;
    case Op::BvAdd:
      if (xs.size() == 2) {
        for (std::size_t k = 0; k < count; ++k) out[k] = (xs[0][k] + xs[1][k]) & m;
        return;
      }
      break;
    case Op::BvAnd:
      if (xs.size() == 2) {
        for (std::size_t k = 0; k < count; ++k) out[k] = xs[0][k] & xs[1][k];
        return;
      }
      break;
    case Op::BvOr:
      if (xs.size() == 2) {
        for (std::size_t k = 0; k < count; ++k) out[k] = xs[0][k] | xs[1][k];
        return;
      }
      break;
    default:
      if (xs.size() == 2 && op != Op::Implies) {
        for (std::size_t k = 0; k < count; ++k) out[k] = binary(op, xs[0][k], xs[1][k], w);
        return;
      }
      break;
  }
  std::vector<std::uint64_t> point(xs.size());
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < xs.size(); ++i) point[i] = xs[i][k];
    out[k] = apply_bits(op, w, point);
  }
}

}  // namespace mg
