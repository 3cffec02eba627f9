#pragma once

#include <json.hpp>

#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Reader for the subset of TOML used by model, timing and scenario files:
// comments, bare or quoted keys, [table] and [[array]] headers with dotted
// names, strings, integers, booleans, arrays and inline tables.

namespace eca::kv {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

namespace detail {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  nlohmann::json document() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    for (;;) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = header(root);
      } else {
        key_value(*table);
      }
      end_of_line();
    }
    return root;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek(std::size_t k = 0) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(line_, column_, message); }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) advance();
    if (peek() == '#')
      while (!eof() && peek() != '\n') advance();
  }

  // Whitespace, newlines and comments; used inside arrays and between lines.
  void skip_blank_lines() {
    for (;;) {
      skip_spaces();
      if (peek() == '\n' || peek() == '\r') {
        advance();
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_spaces();
    if (peek() == '\r') advance();
    if (eof()) return;
    if (peek() != '\n') fail("expected end of line");
    advance();
  }

  std::string key() {
    skip_spaces();
    if (peek() == '"') return quoted();
    std::string k;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-') k += advance();
    if (k.empty()) fail("expected key");
    return k;
  }

  std::vector<std::string> dotted_key() {
    std::vector<std::string> parts{key()};
    skip_spaces();
    while (peek() == '.') {
      advance();
      parts.push_back(key());
      skip_spaces();
    }
    return parts;
  }

  nlohmann::json* header(nlohmann::json& root) {
    advance();
    bool array = peek() == '[';
    if (array) advance();
    auto path = dotted_key();
    expect(']');
    if (array) expect(']');

    nlohmann::json* node = &root;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      nlohmann::json& next = (*node)[path[i]];
      if (next.is_null()) next = nlohmann::json::object();
      if (next.is_array() && !next.empty()) node = &next.back();
      else if (next.is_object()) node = &next;
      else fail("'" + path[i] + "' is not a table");
    }
    nlohmann::json& leaf = (*node)[path.back()];
    if (array) {
      if (leaf.is_null()) leaf = nlohmann::json::array();
      if (!leaf.is_array()) fail("'" + path.back() + "' is not an array of tables");
      leaf.push_back(nlohmann::json::object());
      return &leaf.back();
    }
    if (leaf.is_null()) {
      leaf = nlohmann::json::object();
    } else if (!leaf.is_object() || defined_.count(&leaf)) {
      fail("table '" + path.back() + "' defined twice");
    }
    defined_.insert(&leaf);
    return &leaf;
  }

  void key_value(nlohmann::json& table) {
    auto path = dotted_key();
    nlohmann::json* node = &table;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      nlohmann::json& next = (*node)[path[i]];
      if (next.is_null()) next = nlohmann::json::object();
      if (!next.is_object()) fail("'" + path[i] + "' is not a table");
      node = &next;
    }
    skip_spaces();
    expect('=');
    skip_spaces();
    if (node->contains(path.back())) fail("duplicate key '" + path.back() + "'");
    (*node)[path.back()] = value();
  }

  nlohmann::json value() {
    char c = peek();
    if (c == '"') return quoted();
    if (c == '[') return array();
    if (c == '{') return inline_table();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word;
      while (std::isalpha(static_cast<unsigned char>(peek()))) word += advance();
      if (word == "true") return true;
      if (word == "false") return false;
      fail("unexpected '" + word + "'");
    }
    if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) return number();
    fail("expected a value");
  }

  nlohmann::json number() {
    std::string digits;
    if (peek() == '-' || peek() == '+') digits += advance();
    while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')
      if (char d = advance(); d != '_') digits += d;
    if (peek() == '.') fail("fractional numbers must be quoted strings");
    if (digits.empty() || digits == "-" || digits == "+") fail("expected digits");
    try {
      return std::stoll(digits);
    } catch (const std::out_of_range&) {
      fail("integer out of range");
    }
  }

  std::string quoted() {
    expect('"');
    std::string s;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = advance();
      if (c == '"') return s;
      if (c != '\\') {
        s += c;
        continue;
      }
      char e = eof() ? '\0' : advance();
      switch (e) {
        case '"': s += '"'; break;
        case '\\': s += '\\'; break;
        case 'n': s += '\n'; break;
        case 't': s += '\t'; break;
        default: fail(std::string("unsupported escape '\\") + e + "'");
      }
    }
  }

  nlohmann::json array() {
    expect('[');
    nlohmann::json out = nlohmann::json::array();
    for (;;) {
      skip_blank_lines();
      if (peek() == ']') break;
      out.push_back(value());
      skip_blank_lines();
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() != ']') fail("expected ',' or ']'");
    }
    advance();
    return out;
  }

  nlohmann::json inline_table() {
    expect('{');
    nlohmann::json out = nlohmann::json::object();
    skip_spaces();
    if (peek() == '}') {
      advance();
      return out;
    }
    for (;;) {
      key_value(out);
      skip_spaces();
      if (peek() == ',') {
        advance();
        continue;
      }
      expect('}');
      return out;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, column_ = 1;
  std::set<const nlohmann::json*> defined_;
};

}  // namespace detail

/// Parses a document into a JSON object tree. Throws SyntaxError.
inline nlohmann::json parse(std::string_view text) { return detail::Reader(text).document(); }

}  // namespace eca::kv
