#pragma once

#include <string>

namespace eca {

/// ECA type: one of the four primitives or a reference to a struct by name.
/// `Unknown` marks expressions that have not been through the type checker.
struct Type {
  enum class Kind { Unknown, Void, Bool, Int, Float, Struct };

  Kind kind = Kind::Unknown;
  std::string struct_name;

  static Type unknown() { return {}; }
  static Type void_() { return {Kind::Void, {}}; }
  static Type bool_() { return {Kind::Bool, {}}; }
  static Type int_() { return {Kind::Int, {}}; }
  static Type float_() { return {Kind::Float, {}}; }
  static Type struct_(std::string name) { return {Kind::Struct, std::move(name)}; }

  bool is_known() const { return kind != Kind::Unknown; }
  bool is_struct() const { return kind == Kind::Struct; }
  bool is_primitive() const { return kind == Kind::Bool || kind == Kind::Int || kind == Kind::Float; }
  bool is_numeric() const { return kind == Kind::Int || kind == Kind::Float; }

  friend bool operator==(const Type&, const Type&) = default;

  std::string str() const {
    switch (kind) {
      case Kind::Unknown: return "<unknown>";
      case Kind::Void: return "void";
      case Kind::Bool: return "bool";
      case Kind::Int: return "int";
      case Kind::Float: return "float";
      case Kind::Struct: return struct_name;
    }
    return "?";
  }
};

/// Maps a primitive type keyword to its Type; anything else is Unknown.
inline Type primitive_type(const std::string& keyword) {
  if (keyword == "void") return Type::void_();
  if (keyword == "bool") return Type::bool_();
  if (keyword == "int") return Type::int_();
  if (keyword == "float") return Type::float_();
  return Type::unknown();
}

}  // namespace eca
