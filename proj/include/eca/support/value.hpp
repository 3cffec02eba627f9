#pragma once

#include "eca/support/quantity.hpp"
#include "eca/syntax/type.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace eca {

struct StructInstance;

/// Runtime value. Struct instances are immutable and shared; copying a Value
/// never copies field data.
class Value {
 public:
  struct Unit {
    friend bool operator==(Unit, Unit) { return true; }
  };
  using StructRef = std::shared_ptr<const StructInstance>;
  using Storage = std::variant<Unit, bool, BigInt, double, StructRef>;

  Value() = default;
  Value(Unit u) : v_(u) {}
  Value(bool b) : v_(b) {}
  Value(BigInt i) : v_(std::move(i)) {}
  Value(int i) : v_(BigInt(i)) {}
  Value(double d) : v_(d) {}
  Value(StructRef s) : v_(std::move(s)) {}

  static Value unit() { return Value(Unit{}); }

  bool is_unit() const { return std::holds_alternative<Unit>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<BigInt>(v_); }
  bool is_float() const { return std::holds_alternative<double>(v_); }
  bool is_struct() const { return std::holds_alternative<StructRef>(v_); }

  bool as_bool() const { return get<bool>("bool"); }
  const BigInt& as_int() const { return get<BigInt>("int"); }
  double as_float() const { return get<double>("float"); }
  const StructInstance& as_struct() const { return *get<StructRef>("struct"); }

  const Storage& storage() const { return v_; }

  Type type() const;
  std::string str() const;

  friend bool operator==(const Value& a, const Value& b);

 private:
  template <class T>
  const T& get(const char* what) const {
    if (auto p = std::get_if<T>(&v_)) return *p;
    throw std::logic_error(std::string("value is not a ") + what);
  }

  Storage v_;
};

struct StructInstance {
  std::string type_name;
  std::vector<std::pair<std::string, Value>> fields;

  const Value* field(const std::string& name) const {
    for (auto& [n, v] : fields)
      if (n == name) return &v;
    return nullptr;
  }
};

inline Value make_struct(std::string type_name, std::vector<std::pair<std::string, Value>> fields) {
  return Value(std::make_shared<const StructInstance>(StructInstance{std::move(type_name), std::move(fields)}));
}

inline Type Value::type() const {
  return std::visit(
      [](const auto& x) -> Type {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Unit>) return Type::void_();
        else if constexpr (std::is_same_v<T, bool>) return Type::bool_();
        else if constexpr (std::is_same_v<T, BigInt>) return Type::int_();
        else if constexpr (std::is_same_v<T, double>) return Type::float_();
        else return Type::struct_(x->type_name);
      },
      v_);
}

/// Shortest fixed-notation rendering that always contains a '.', so the text
/// re-lexes as a float literal with the same bits.
inline std::string format_float(double d) {
  char buf[512];
  auto res = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::fixed);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos && s.find_first_of("ni") == std::string::npos) s += ".0";
  return s;
}

inline std::string Value::str() const {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Unit>) return "unit";
        else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
        else if constexpr (std::is_same_v<T, BigInt>) return x.str();
        else if constexpr (std::is_same_v<T, double>) return format_float(x);
        else {
          std::string out = x->type_name + "(";
          for (std::size_t i = 0; i < x->fields.size(); ++i) {
            if (i) out += ", ";
            out += x->fields[i].second.str();
          }
          return out + ")";
        }
      },
      v_);
}

// Floats compare by bit pattern so that engines producing the same NaN agree.
inline bool operator==(const Value& a, const Value& b) {
  if (a.v_.index() != b.v_.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.v_);
        if constexpr (std::is_same_v<T, double>) return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
        else if constexpr (std::is_same_v<T, Value::StructRef>) {
          if (x == y) return true;
          return x->type_name == y->type_name && x->fields == y->fields;
        } else return x == y;
      },
      a.v_);
}

inline std::size_t hash_combine(std::size_t seed, std::size_t h) {
  return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::size_t hash_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Value::Unit>) return 0x51;
        else if constexpr (std::is_same_v<T, bool>) return x ? 0x71 : 0x70;
        else if constexpr (std::is_same_v<T, BigInt>) return std::hash<BigInt>{}(x);
        else if constexpr (std::is_same_v<T, double>) return std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(x));
        else {
          std::size_t h = std::hash<std::string>{}(x->type_name);
          for (auto& [n, fv] : x->fields) h = hash_combine(h, hash_value(fv));
          return h;
        }
      },
      v.storage());
}

/// Zero value of a type: false, 0, 0.0, unit, or a struct of zero fields.
/// `field_types` resolves a struct name to its ordered field list.
template <class FieldLookup>
Value default_value(const Type& t, const FieldLookup& field_types) {
  switch (t.kind) {
    case Type::Kind::Bool: return Value(false);
    case Type::Kind::Int: return Value(BigInt(0));
    case Type::Kind::Float: return Value(0.0);
    case Type::Kind::Struct: {
      std::vector<std::pair<std::string, Value>> fields;
      for (const auto& [name, ft] : field_types(t.struct_name)) fields.emplace_back(name, default_value(ft, field_types));
      return make_struct(t.struct_name, std::move(fields));
    }
    default: return Value::unit();
  }
}

/// Parses a literal of the given primitive type from text (CLI inputs,
/// scenario files, model return specs). Returns nullopt on mismatch.
inline std::optional<Value> parse_literal(const std::string& text, const Type& t) {
  switch (t.kind) {
    case Type::Kind::Bool:
      if (text == "true") return Value(true);
      if (text == "false") return Value(false);
      return std::nullopt;
    case Type::Kind::Int: {
      std::string_view s = text;
      bool neg = !s.empty() && s.front() == '-';
      if (neg) s.remove_prefix(1);
      if (s.empty()) return std::nullopt;
      for (char c : s)
        if (c < '0' || c > '9') return std::nullopt;
      BigInt v{std::string(s)};
      return Value(neg ? BigInt(-v) : v);
    }
    case Type::Kind::Float: {
      double d = 0;
      auto res = std::from_chars(text.data(), text.data() + text.size(), d);
      if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
      return Value(d);
    }
    case Type::Kind::Void:
      if (text == "unit" || text.empty()) return Value::unit();
      return std::nullopt;
    default: return std::nullopt;
  }
}

}  // namespace eca
