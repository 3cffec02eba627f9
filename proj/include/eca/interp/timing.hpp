#pragma once

#include "eca/hw/kv.hpp"
#include "eca/support/quantity.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eca {

/// Language constructs that carry an execution time.
enum class Construct { Var, Assign, FieldAccess, Const, BinOp, Decl, Construct, Call, If, While, Repeat, Skip, Seq };

inline constexpr std::array<Construct, 13> kAllConstructs = {
    Construct::Var,  Construct::Assign, Construct::FieldAccess, Construct::Const,  Construct::BinOp,
    Construct::Decl, Construct::Construct, Construct::Call,     Construct::If,     Construct::While,
    Construct::Repeat, Construct::Skip, Construct::Seq};

inline std::string_view timing_key(Construct c) {
  switch (c) {
    case Construct::Var: return "t_var";
    case Construct::Assign: return "t_assign";
    case Construct::FieldAccess: return "t_fieldaccess";
    case Construct::Const: return "t_const";
    case Construct::BinOp: return "t_binop";
    case Construct::Decl: return "t_decl";
    case Construct::Construct: return "t_construct";
    case Construct::Call: return "t_call";
    case Construct::If: return "t_if";
    case Construct::While: return "t_while";
    case Construct::Repeat: return "t_repeat";
    case Construct::Skip: return "t_skip";
    case Construct::Seq: return "t_seq";
  }
  return "?";
}

class TimingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Duration of each construct; everything defaults to 0 s.
class TimingTable {
 public:
  const Duration& operator[](Construct c) const { return times_[static_cast<std::size_t>(c)]; }

  void set(Construct c, Duration d) {
    if (d.negative()) throw TimingError(std::string(timing_key(c)) + " must not be negative");
    times_[static_cast<std::size_t>(c)] = std::move(d);
  }

  bool all_zero() const {
    for (auto& t : times_)
      if (!t.is_zero()) return false;
    return true;
  }

  /// Same durations for every construct.
  static TimingTable uniform(const Duration& d) {
    TimingTable t;
    for (auto c : kAllConstructs) t.set(c, d);
    return t;
  }

  friend bool operator==(const TimingTable& a, const TimingTable& b) { return a.times_ == b.times_; }

 private:
  std::array<Duration, kAllConstructs.size()> times_{};
};

/// Reads `t_var = "1/2"` style entries. Unknown keys are an error.
inline TimingTable load_timing(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = kv::parse(text);
  } catch (const kv::SyntaxError& e) {
    throw TimingError(e.what());
  }
  TimingTable table;
  for (auto& [key, value] : doc.items()) {
    bool known = false;
    for (auto c : kAllConstructs) {
      if (timing_key(c) != key) continue;
      known = true;
      std::string text_value;
      if (value.is_string()) text_value = value.get<std::string>();
      else if (value.is_number_integer()) text_value = std::to_string(value.get<long long>());
      else throw TimingError(key + ": expected a rational string");
      try {
        table.set(c, Duration(parse_rational(text_value)));
      } catch (const std::invalid_argument& e) {
        throw TimingError(key + ": " + e.what());
      }
    }
    if (!known) throw TimingError("unknown timing key '" + key + "'");
  }
  return table;
}

}  // namespace eca
