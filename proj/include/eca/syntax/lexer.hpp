#pragma once

#include "eca/support/source.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace eca {

struct Token {
  enum class Kind { Keyword, Identifier, IntLiteral, FloatLiteral, BoolLiteral, Operator, Punctuation, End };

  Kind kind = Kind::End;
  std::string text;
  Span span;

  bool is(Kind k, std::string_view t) const { return kind == k && text == t; }
  bool is_keyword(std::string_view t) const { return is(Kind::Keyword, t); }
  bool is_op(std::string_view t) const { return is(Kind::Operator, t); }
  bool is_punct(std::string_view t) const { return is(Kind::Punctuation, t); }
};

inline const char* token_kind_name(Token::Kind k) {
  switch (k) {
    case Token::Kind::Keyword: return "keyword";
    case Token::Kind::Identifier: return "identifier";
    case Token::Kind::IntLiteral: return "integer";
    case Token::Kind::FloatLiteral: return "float";
    case Token::Kind::BoolLiteral: return "bool";
    case Token::Kind::Operator: return "operator";
    case Token::Kind::Punctuation: return "punctuation";
    case Token::Kind::End: return "end of input";
  }
  return "?";
}

inline constexpr std::array<std::string_view, 15> kKeywords = {
    "struct", "begin", "end",    "void", "bool",  "int", "float", "skip",
    "if",     "then",  "else",   "repeat", "while", "and", "or"};

inline bool is_keyword(std::string_view word) {
  for (auto k : kKeywords)
    if (k == word) return true;
  return false;
}

class LexError : public SourceError {
 public:
  using SourceError::SourceError;
};

/// Splits ECA source into tokens. `//` comments run to end of line and are
/// dropped. The returned list always ends with an End token.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  std::uint32_t line = 1, col = 1;

  auto make_span = [&](std::size_t start, std::uint32_t l, std::uint32_t c) {
    return Span{l, c, static_cast<std::uint32_t>(i - start), start};
  };
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }

    std::size_t start = i;
    std::uint32_t l = line, co = col;
    Token tok;

    if (is_alpha(c)) {
      while (i < src.size() && (is_alpha(src[i]) || is_digit(src[i]))) advance();
      tok.text = std::string(src.substr(start, i - start));
      if (tok.text == "true" || tok.text == "false") tok.kind = Token::Kind::BoolLiteral;
      else if (is_keyword(tok.text)) tok.kind = Token::Kind::Keyword;
      else tok.kind = Token::Kind::Identifier;
    } else if (is_digit(c)) {
      while (i < src.size() && is_digit(src[i])) advance();
      tok.kind = Token::Kind::IntLiteral;
      if (i + 1 < src.size() && src[i] == '.' && is_digit(src[i + 1])) {
        advance();
        while (i < src.size() && is_digit(src[i])) advance();
        tok.kind = Token::Kind::FloatLiteral;
      }
      tok.text = std::string(src.substr(start, i - start));
    } else {
      static constexpr std::array<std::string_view, 5> two = {">=", "==", "!=", "<=", "::"};
      std::string_view pair = src.substr(i, 2);
      bool matched = false;
      for (auto t : two) {
        if (pair == t) {
          advance(2);
          tok.kind = Token::Kind::Operator;
          tok.text = std::string(t);
          matched = true;
          break;
        }
      }
      if (!matched) {
        switch (c) {
          case '+': case '-': case '*': case '>': case '<': case '=': case '.':
            tok.kind = Token::Kind::Operator;
            break;
          case '(': case ')': case ',': case ';':
            tok.kind = Token::Kind::Punctuation;
            break;
          default: {
            // Report the whole UTF-8 sequence, not just its lead byte.
            std::size_t len = 1;
            auto u = static_cast<unsigned char>(c);
            if (u >= 0xF0) len = 4;
            else if (u >= 0xE0) len = 3;
            else if (u >= 0xC0) len = 2;
            advance(len);
            throw LexError(make_span(start, l, co),
                           "unexpected character '" + std::string(src.substr(start, i - start)) + "'");
          }
        }
        advance();
        tok.text = std::string(1, c);
      }
    }
    tok.span = make_span(start, l, co);
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = Token::Kind::End;
  end.span = Span{line, col, 0, src.size()};
  out.push_back(end);
  return out;
}

}  // namespace eca
