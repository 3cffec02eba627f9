#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eca {

/// 1-based line/column of the first byte plus byte offset and length.
struct Span {
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::uint32_t length = 0;
  std::size_t offset = 0;

  bool valid() const { return line > 0; }

  /// Smallest span covering both.
  static Span cover(const Span& a, const Span& b) {
    if (!a.valid()) return b;
    if (!b.valid()) return a;
    const Span& first = a.offset <= b.offset ? a : b;
    std::size_t end = std::max(a.offset + a.length, b.offset + b.length);
    Span s = first;
    s.length = static_cast<std::uint32_t>(end - first.offset);
    return s;
  }
};

/// A located diagnostic, rendered as `file:line:col: message`.
struct Diagnostic {
  Span span;
  std::string message;

  std::string format(const std::string& file) const {
    return file + ":" + std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message;
  }
};

/// Base of the syntax-level errors (lexing, parsing, classification).
class SourceError : public std::runtime_error {
 public:
  SourceError(Span span, const std::string& message) : std::runtime_error(message), span_(span) {}
  const Span& span() const { return span_; }
  Diagnostic diagnostic() const { return {span_, what()}; }

 private:
  Span span_;
};

}  // namespace eca
