#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace mg {

/// A SyGuS sort: either Bool or a fixed-width bitvector (1..64 bits).
class Sort {
 public:
  enum class Kind : std::uint8_t { Bool, BitVec };

  static constexpr unsigned kMaxWidth = 64;

  static Sort boolean() { return Sort(Kind::Bool, 1); }
  static Sort bitvec(unsigned width);

  Kind kind() const { return kind_; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_bitvec() const { return kind_ == Kind::BitVec; }

  /// Bit width; Bool reports 1.
  unsigned width() const { return width_; }

  /// All-ones mask for the sort's width.
  std::uint64_t mask() const { return width_ >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width_) - 1); }

  bool fits(std::uint64_t value) const { return (value & ~mask()) == 0; }

  std::string to_string() const;

  friend bool operator==(const Sort&, const Sort&) = default;
  friend auto operator<=>(const Sort&, const Sort&) = default;

 private:
  Sort(Kind kind, unsigned width) : kind_(kind), width_(width) {}

  Kind kind_;
  unsigned width_;
};

/// A concrete value of some sort. Booleans use bits 0/1.
struct Value {
  Sort sort = Sort::boolean();
  std::uint64_t bits = 0;

  static Value boolean(bool b) { return {Sort::boolean(), b ? 1u : 0u}; }
  bool as_bool() const { return bits != 0; }

  friend bool operator==(const Value&, const Value&) = default;
};

}  // namespace mg
