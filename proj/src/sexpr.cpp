#include "mg/sexpr.hpp"

#include <cctype>
#include <cstring>

#include "mg/errors.hpp"

namespace mg {
namespace {

bool is_symbol_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || std::strchr("~!@$%^&*_-+=<>.?/", c) != nullptr;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<SExpr> read_all() {
    std::vector<SExpr> out;
    skip_blank();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip_blank();
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, column_); }

  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = peek();
      if (c == ';') {
        while (pos_ < text_.size() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  SExpr start(SExpr::Kind kind) const {
    SExpr e;
    e.kind = kind;
    e.line = line_;
    e.column = column_;
    return e;
  }

  SExpr read() {
    const char c = peek();
    if (c == '(') {
      SExpr list = start(SExpr::Kind::List);
      advance();
      skip_blank();
      while (true) {
        if (pos_ >= text_.size()) throw ParseError("unterminated list", list.line, list.column);
        if (peek() == ')') {
          advance();
          return list;
        }
        list.items.push_back(read());
        skip_blank();
      }
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '"') return read_string();
    if (c == '|') return read_quoted_symbol();
    if (c == '#') return read_bitvector();
    if (c == ':') {
      SExpr e = start(SExpr::Kind::Keyword);
      advance();
      e.text = ":" + read_symbol_chars();
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      SExpr e = start(SExpr::Kind::Numeral);
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
        e.text += peek();
        advance();
      }
      if (pos_ < text_.size() && is_symbol_char(peek())) fail("malformed numeral");
      return e;
    }
    if (is_symbol_char(c)) {
      SExpr e = start(SExpr::Kind::Symbol);
      e.text = read_symbol_chars();
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string read_symbol_chars() {
    std::string s;
    while (pos_ < text_.size() && is_symbol_char(peek())) {
      s += peek();
      advance();
    }
    if (s.empty()) fail("empty symbol");
    return s;
  }

  SExpr read_string() {
    SExpr e = start(SExpr::Kind::String);
    advance();
    while (true) {
      if (pos_ >= text_.size()) throw ParseError("unterminated string", e.line, e.column);
      const char c = peek();
      advance();
      if (c == '"') {
        if (pos_ < text_.size() && peek() == '"') {
          e.text += '"';
          advance();
          continue;
        }
        return e;
      }
      e.text += c;
    }
  }

  SExpr read_quoted_symbol() {
    SExpr e = start(SExpr::Kind::Symbol);
    advance();
    while (true) {
      if (pos_ >= text_.size()) throw ParseError("unterminated quoted symbol", e.line, e.column);
      const char c = peek();
      advance();
      if (c == '|') return e;
      e.text += c;
    }
  }

  SExpr read_bitvector() {
    SExpr e = start(SExpr::Kind::Binary);
    advance();
    if (pos_ >= text_.size()) fail("dangling '#'");
    const char radix = peek();
    if (radix == 'b') {
      e.kind = SExpr::Kind::Binary;
    } else if (radix == 'x') {
      e.kind = SExpr::Kind::Hex;
    } else {
      fail("expected #b or #x literal");
    }
    advance();
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(peek()))) {
      const char d = peek();
      const bool ok = radix == 'b' ? (d == '0' || d == '1') : std::isxdigit(static_cast<unsigned char>(d)) != 0;
      if (!ok) fail(std::string("invalid digit '") + d + "' in bitvector literal");
      e.text += d;
      advance();
    }
    if (e.text.empty()) throw ParseError("empty bitvector literal", e.line, e.column);
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

std::string_view SExpr::head() const {
  if (kind != Kind::List || items.empty() || items.front().kind != Kind::Symbol) return {};
  return items.front().text;
}

std::string SExpr::to_string() const {
  switch (kind) {
    case Kind::List: {
      std::string s = "(";
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += ' ';
        s += items[i].to_string();
      }
      return s + ")";
    }
    case Kind::Binary: return "#b" + text;
    case Kind::Hex: return "#x" + text;
    case Kind::String: return "\"" + text + "\"";
    default: return text;
  }
}

std::vector<SExpr> read_sexprs(std::string_view text) { return Reader(text).read_all(); }

}  // namespace mg
