#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace mg {

/// Generic s-expression node with source position.
struct SExpr {
  enum class Kind { List, Symbol, Numeral, Binary, Hex, String, Keyword };

  Kind kind = Kind::List;
  std::string text;  // atom spelling (without #b/#x prefix for Binary/Hex)
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_list() const { return kind == Kind::List; }
  bool is_symbol() const { return kind == Kind::Symbol; }
  bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }

  /// Head symbol of a non-empty list, or empty.
  std::string_view head() const;

  std::string to_string() const;
};

/// Reads every top-level s-expression. `;` comments run to end of line.
/// Throws ParseError with the position of the offending character.
std::vector<SExpr> read_sexprs(std::string_view text);

}  // namespace mg
