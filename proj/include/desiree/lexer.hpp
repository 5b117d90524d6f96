#pragma once

#include "desiree/diagnostics.hpp"
#include "desiree/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace desiree {

enum class TokenKind {
  Ident,
  Number,   // value holds the rational
  Percent,  // "80%"; value holds 0.8
  String,   // text holds the unescaped contents
  Var,      // "?X"
  Unit,     // "(Sec.)"; text holds "Sec."
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Lt,
  Gt,
  LessEq,
  GreaterEq,
  Colon,
  SubsumedBy,  // ":<"
  DoubleColon,
  Comma,
  Period,  // declaration terminator
  Dot,     // projection, written without surrounding whitespace
  Bar,
  Minus,
  Amp,
  Equals,
  End
};

inline const char* to_string(TokenKind k) {
  switch (k) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::Percent: return "percentage";
    case TokenKind::String: return "string";
    case TokenKind::Var: return "variable";
    case TokenKind::Unit: return "unit";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Lt: return "'<'";
    case TokenKind::Gt: return "'>'";
    case TokenKind::LessEq: return "'<='";
    case TokenKind::GreaterEq: return "'>='";
    case TokenKind::Colon: return "':'";
    case TokenKind::SubsumedBy: return "':<'";
    case TokenKind::DoubleColon: return "'::'";
    case TokenKind::Comma: return "','";
    case TokenKind::Period: return "'.'";
    case TokenKind::Dot: return "projection '.'";
    case TokenKind::Bar: return "'|'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Amp: return "'&'";
    case TokenKind::Equals: return "'='";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  Rational value{0};
  Span span;
};

namespace detail {

inline bool ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
inline bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9') || c == '\'' || c == '@';
}
inline bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : src_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::vector<Token> open;  // unclosed ( [ {
    while (true) {
      skip_space_and_comments();
      if (pos_ >= src_.size()) break;
      Token t = next();
      switch (t.kind) {
        case TokenKind::LParen:
        case TokenKind::LBracket:
        case TokenKind::LBrace: open.push_back(t); break;
        case TokenKind::RParen:
        case TokenKind::RBracket:
        case TokenKind::RBrace:
          if (!open.empty()) open.pop_back();
          break;
        default: break;
      }
      out.push_back(std::move(t));
    }
    if (!open.empty())
      throw LexError(open.back().span, "unterminated " + std::string(to_string(open.back().kind)));
    return out;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
      ++pos_;
    }
  }

  Span here() const { return Span{line_, col_, pos_, 0}; }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token make(TokenKind kind, Span start, std::string text = {}) {
    Token t;
    t.kind = kind;
    t.span = start;
    t.span.length = pos_ - start.offset;
    t.text = text.empty() ? std::string(src_.substr(start.offset, pos_ - start.offset)) : text;
    return t;
  }

  Token simple(TokenKind kind, std::size_t len) {
    const Span s = here();
    advance(len);
    return make(kind, s);
  }

  bool starts_with(std::string_view lit) const { return src_.substr(pos_, lit.size()) == lit; }

  Token next() {
    const Span start = here();
    const char c = peek();

    // Multi-byte operator synonyms.
    struct Synonym {
      std::string_view text;
      TokenKind kind;
    };
    static constexpr Synonym synonyms[] = {
        {"(and)", TokenKind::Amp},       {"(or)", TokenKind::Bar},
        {"\xE2\x88\xA9", TokenKind::Amp},  // ∩
        {"\xE2\x88\xA7", TokenKind::Amp},  // ∧
        {"\xE2\x88\xA8", TokenKind::Bar},  // ∨
        {"\xE2\x88\xAA", TokenKind::Bar},  // ∪
        {"\xE2\x89\xA4", TokenKind::LessEq},     // ≤
        {"\xE2\x89\xA5", TokenKind::GreaterEq},  // ≥
    };
    for (const auto& syn : synonyms) {
      if (starts_with(syn.text)) {
        advance(syn.text.size());
        return make(syn.kind, start);
      }
    }

    if (ident_start(c)) {
      while (ident_char(peek())) advance();
      return make(TokenKind::Ident, start);
    }
    if (digit(c)) return number(start);
    if (c == '?') {
      advance();
      if (!ident_start(peek())) throw LexError(start, "expected variable name after '?'");
      while (ident_char(peek())) advance();
      return make(TokenKind::Var, start);
    }
    if (c == '"') return string_literal(start);

    switch (c) {
      case '(': {
        if (auto unit = unit_token(start)) return *unit;
        return simple(TokenKind::LParen, 1);
      }
      case ')': return simple(TokenKind::RParen, 1);
      case '[': return simple(TokenKind::LBracket, 1);
      case ']': return simple(TokenKind::RBracket, 1);
      case '{': return simple(TokenKind::LBrace, 1);
      case '}': return simple(TokenKind::RBrace, 1);
      case '<':
        if (peek(1) == '=') return simple(TokenKind::LessEq, 2);
        return simple(TokenKind::Lt, 1);
      case '>':
        if (peek(1) == '=') return simple(TokenKind::GreaterEq, 2);
        return simple(TokenKind::Gt, 1);
      case ':':
        if (peek(1) == '<') return simple(TokenKind::SubsumedBy, 2);
        if (peek(1) == ':') return simple(TokenKind::DoubleColon, 2);
        return simple(TokenKind::Colon, 1);
      case ',': return simple(TokenKind::Comma, 1);
      case '|': return simple(TokenKind::Bar, 1);
      case '-': return simple(TokenKind::Minus, 1);
      case '&': return simple(TokenKind::Amp, 1);
      case '=': return simple(TokenKind::Equals, 1);
      case '.': {
        // "F1.object" is a projection; anything else terminates a declaration.
        const bool glued_left = pos_ > 0 && (ident_char(src_[pos_ - 1]) || src_[pos_ - 1] == ')' ||
                                             src_[pos_ - 1] == '>' || src_[pos_ - 1] == '}');
        const bool glued_right = ident_start(peek(1));
        return simple(glued_left && glued_right ? TokenKind::Dot : TokenKind::Period, 1);
      }
      default: break;
    }
    Span s = start;
    s.length = 1;
    throw LexError(s, std::string("unexpected character '") + c + "'");
  }

  // "(Sec.)" or "(MB/s.)"; nullopt when the parenthesis opens something else.
  std::optional<Token> unit_token(Span start) {
    std::size_t i = pos_ + 1;
    if (i >= src_.size() || !ident_start(src_[i])) return std::nullopt;
    while (i < src_.size() && (ident_char(src_[i]) || src_[i] == '/')) ++i;
    if (i + 1 >= src_.size() || src_[i] != '.' || src_[i + 1] != ')') return std::nullopt;
    const std::string text(src_.substr(pos_ + 1, i + 1 - (pos_ + 1)));
    advance(i + 2 - pos_);
    return make(TokenKind::Unit, start, text);
  }

  Token number(Span start) {
    auto digits = [this] {
      while (digit(peek())) advance();
    };
    digits();
    if (peek() == '.' && digit(peek(1))) {
      advance();
      digits();
    }
    std::string_view whole = src_.substr(start.offset, pos_ - start.offset);
    std::optional<Rational> value = parse_decimal(whole);
    if (peek() == '/' && digit(peek(1)) && whole.find('.') == std::string_view::npos) {
      advance();
      const std::size_t den_start = pos_;
      digits();
      const auto den = parse_decimal(src_.substr(den_start, pos_ - den_start));
      if (!value || !den || *den == Rational(0)) {
        Span s = start;
        s.length = pos_ - start.offset;
        throw LexError(s, "malformed fraction");
      }
      value = *value / *den;
    }
    if (!value) {
      Span s = start;
      s.length = pos_ - start.offset;
      throw LexError(s, "numeric literal out of range");
    }
    TokenKind kind = TokenKind::Number;
    if (peek() == '%') {
      advance();
      kind = TokenKind::Percent;
      *value /= Rational(100);
    }
    Token t = make(kind, start);
    t.value = *value;
    return t;
  }

  Token string_literal(Span start) {
    advance();  // opening quote
    std::string text;
    while (true) {
      if (pos_ >= src_.size()) throw LexError(start, "unterminated string literal");
      const char c = peek();
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        const char e = peek(1);
        if (e == 'n') {
          text += '\n';
        } else if (e == '"' || e == '\\') {
          text += e;
        } else {
          throw LexError(here(), "unknown escape sequence");
        }
        advance(2);
        continue;
      }
      text += c;
      advance();
    }
    Token t = make(TokenKind::String, start);
    t.text = std::move(text);
    return t;
  }
};

}  // namespace detail

/// Splits model text into tokens. Throws LexError with a span on bad input.
inline std::vector<Token> tokenize(std::string_view text) { return detail::Lexer(text).run(); }

}  // namespace desiree
