#pragma once

#include "eca/hw/model.hpp"
#include "eca/interp/timing.hpp"
#include "eca/support/value.hpp"
#include "eca/syntax/ast.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// State, errors and energy bookkeeping shared by the interpreter and the
// transformation evaluator.

namespace eca {

inline constexpr std::size_t kDefaultRecursionLimit = 10000;

class RuntimeError : public std::runtime_error {
 public:
  enum class Kind { UnboundVariable, Step, NegativeRepeat, RecursionLimit, MissingMain, BadInput, TypeMismatch };

  RuntimeError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::UnboundVariable: return "UnboundVariable";
      case Kind::Step: return "StepError";
      case Kind::NegativeRepeat: return "NegativeRepeat";
      case Kind::RecursionLimit: return "RecursionLimit";
      case Kind::MissingMain: return "MissingMain";
      case Kind::BadInput: return "BadInput";
      case Kind::TypeMismatch: return "TypeMismatch";
    }
    return "RuntimeError";
  }
  const char* kind_name() const { return kind_name(kind_); }

 private:
  Kind kind_;
};

inline RuntimeError recursion_limit_error(std::size_t limit, const std::string& function) {
  return RuntimeError(RuntimeError::Kind::RecursionLimit,
                      "recursion limit of " + std::to_string(limit) + " exceeded calling '" + function + "'");
}

inline RuntimeError negative_repeat_error(const BigInt& count) {
  return RuntimeError(RuntimeError::Kind::NegativeRepeat, "repeat count " + count.str() + " is negative");
}

/// σ: a stack of scopes, innermost last.
class LocalState {
 public:
  LocalState() = default;
  explicit LocalState(std::map<std::string, Value> scope) { scopes_.push_back(std::move(scope)); }

  const Value* find(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto f = it->find(name); f != it->end()) return &f->second;
    return nullptr;
  }
  Value* find(const std::string& name) {
    return const_cast<Value*>(static_cast<const LocalState&>(*this).find(name));
  }

  void push() { scopes_.emplace_back(); }
  void pop() { scopes_.pop_back(); }

  void declare(const std::string& name, Value v) {
    if (scopes_.empty()) scopes_.emplace_back();
    scopes_.back()[name] = std::move(v);
  }

  const std::vector<std::map<std::string, Value>>& scopes() const { return scopes_; }
  bool empty() const { return scopes_.empty(); }

  friend bool operator==(const LocalState&, const LocalState&) = default;

 private:
  std::vector<std::map<std::string, Value>> scopes_;
};

/// G: global variables by name.
using GlobalState = std::map<std::string, Value>;

inline std::size_t hash_value(const std::map<std::string, Value>& m) {
  std::size_t h = m.size();
  for (auto& [k, v] : m) h = hash_combine(hash_combine(h, std::hash<std::string>{}(k)), hash_value(v));
  return h;
}

inline std::size_t hash_value(const LocalState& s) {
  std::size_t h = 0x51ed;
  for (auto& scope : s.scopes()) h = hash_combine(h, hash_value(scope));
  return h;
}

inline std::size_t hash_value(const ComponentStates& g) {
  std::size_t h = g.size();
  for (auto& [k, v] : g) h = hash_combine(hash_combine(h, std::hash<std::string>{}(k)), std::hash<std::string>{}(v));
  return h;
}

/// Binary operator semantics. Floats follow IEEE comparison; ints are exact.
inline Value apply_binop(BinaryOp op, const Value& l, const Value& r) {
  auto mismatch = [&] {
    return RuntimeError(RuntimeError::Kind::TypeMismatch, std::string("operator '") + binary_op_text(op) +
                                                              "' applied to " + l.type().str() + " and " +
                                                              r.type().str());
  };
  switch (op) {
    case BinaryOp::And:
    case BinaryOp::Or:
      if (!l.is_bool() || !r.is_bool()) throw mismatch();
      return op == BinaryOp::And ? (l.as_bool() && r.as_bool()) : (l.as_bool() || r.as_bool());
    default: break;
  }
  if (l.is_int() && r.is_int()) {
    const BigInt& a = l.as_int();
    const BigInt& b = r.as_int();
    switch (op) {
      case BinaryOp::Add: return BigInt(a + b);
      case BinaryOp::Sub: return BigInt(a - b);
      case BinaryOp::Mul: return BigInt(a * b);
      case BinaryOp::Gt: return a > b;
      case BinaryOp::Ge: return a >= b;
      case BinaryOp::Eq: return a == b;
      case BinaryOp::Ne: return a != b;
      case BinaryOp::Le: return a <= b;
      case BinaryOp::Lt: return a < b;
      default: break;
    }
  } else if (l.is_float() && r.is_float()) {
    double a = l.as_float();
    double b = r.as_float();
    switch (op) {
      case BinaryOp::Add: return a + b;
      case BinaryOp::Sub: return a - b;
      case BinaryOp::Mul: return a * b;
      case BinaryOp::Gt: return a > b;
      case BinaryOp::Ge: return a >= b;
      case BinaryOp::Eq: return a == b;
      case BinaryOp::Ne: return a != b;
      case BinaryOp::Le: return a <= b;
      case BinaryOp::Lt: return a < b;
      default: break;
    }
  } else if (l.is_bool() && r.is_bool()) {
    if (op == BinaryOp::Eq) return l.as_bool() == r.as_bool();
    if (op == BinaryOp::Ne) return l.as_bool() != r.as_bool();
  }
  throw mismatch();
}

inline Value field_of(const Value& v, const std::string& field) {
  if (!v.is_struct()) throw RuntimeError(RuntimeError::Kind::TypeMismatch, "field access '." + field + "' on " + v.type().str());
  if (auto f = v.as_struct().field(field)) return *f;
  throw RuntimeError(RuntimeError::Kind::TypeMismatch, "struct " + v.type().str() + " has no field '" + field + "'");
}

struct TraceEvent {
  enum class Kind { Transition, TimeDraw };

  Kind kind = Kind::TimeDraw;
  // Transition: the component and edge. Time-draw: the construct label
  // ("t_var", or "C::f" for a component function's duration).
  std::string component, function, from, to;
  std::string construct;
  Duration duration;
  Power power;
  std::map<std::string, Energy> shares;
  Energy energy;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;

  nlohmann::json to_json() const {
    nlohmann::json j;
    if (kind == Kind::Transition) {
      j["kind"] = "transition";
      j["component"] = component;
      j["function"] = function;
      j["from"] = from;
      j["to"] = to;
    } else {
      j["kind"] = "time-draw";
      j["construct"] = construct;
      j["duration"] = duration.fraction();
      j["power"] = power.fraction();
      nlohmann::json s = nlohmann::json::object();
      for (auto& [c, e] : shares) s[c] = e.fraction();
      j["shares"] = s;
    }
    j["energy"] = energy.fraction();
    return j;
  }

  std::string str() const {
    if (kind == Kind::Transition)
      return "transition " + component + "::" + function + " " + from + "->" + to + " " + energy.str();
    return "time-draw " + construct + " " + duration.str() + " x " + power.str() + " = " + energy.str();
  }
};

/// Accumulates energy and records trace events.
class EnergyMeter {
 public:
  EnergyMeter(const ModelSet& models, bool record) : models_(&models), record_(record) {}

  Energy time_draw(std::string label, const Duration& d, const ComponentStates& gamma) {
    if (d.is_zero()) return Energy();
    TraceEvent ev;
    ev.kind = TraceEvent::Kind::TimeDraw;
    ev.construct = std::move(label);
    ev.duration = d;
    for (auto& [name, model] : models_->models()) {
      auto it = gamma.find(name);
      if (it == gamma.end()) throw std::out_of_range("no state for component '" + name + "'");
      Power p = power_draw(model, it->second);
      ev.power += p;
      Energy share = p * d;
      if (!share.is_zero()) ev.shares[name] = share;
    }
    ev.energy = ev.power * d;
    if (ev.energy.is_zero()) return Energy();
    for (auto& [name, share] : ev.shares) per_component_[name] += share;
    time_draw_ += ev.energy;
    total_ += ev.energy;
    Energy e = ev.energy;
    if (record_) trace_.push_back(std::move(ev));
    return e;
  }

  Energy transition(const std::string& component, const std::string& function, const std::string& from,
                    const std::string& to, const Energy& energy) {
    transition_ += energy;
    total_ += energy;
    per_component_[component] += energy;
    if (record_) {
      TraceEvent ev;
      ev.kind = TraceEvent::Kind::Transition;
      ev.component = component;
      ev.function = function;
      ev.from = from;
      ev.to = to;
      ev.energy = energy;
      trace_.push_back(std::move(ev));
    }
    return energy;
  }

  const Energy& total() const { return total_; }
  const Energy& transition_total() const { return transition_; }
  const Energy& time_draw_total() const { return time_draw_; }
  const std::map<std::string, Energy>& per_component() const { return per_component_; }
  std::vector<TraceEvent>& trace() { return trace_; }

 private:
  const ModelSet* models_;
  bool record_;
  Energy total_, transition_, time_draw_;
  std::map<std::string, Energy> per_component_;
  std::vector<TraceEvent> trace_;
};

/// Outcome of running a program on either engine.
struct RunResult {
  Value value;
  LocalState final_locals;
  GlobalState final_globals;
  ComponentStates final_components;
  Energy energy;
  Energy transition_energy;
  Energy time_draw_energy;
  std::map<std::string, Energy> per_component;
  std::vector<TraceEvent> trace;
};

struct RunOptions {
  std::size_t recursion_limit = kDefaultRecursionLimit;
  bool record_trace = true;
};

/// Inputs for main: name to value.
using Inputs = std::map<std::string, Value>;

/// Checks `inputs` against main's parameters and returns the initial scope.
inline std::map<std::string, Value> bind_main_inputs(const std::vector<Param>& params, const Inputs& inputs) {
  std::map<std::string, Value> scope;
  for (auto& p : params) {
    auto it = inputs.find(p.name);
    if (it == inputs.end()) throw RuntimeError(RuntimeError::Kind::BadInput, "missing input '" + p.name + "'");
    if (it->second.type() != p.type)
      throw RuntimeError(RuntimeError::Kind::BadInput, "input '" + p.name + "' must be " + p.type.str() + ", got " +
                                                           it->second.type().str());
    scope[p.name] = it->second;
  }
  for (auto& [name, v] : inputs)
    if (!scope.count(name)) throw RuntimeError(RuntimeError::Kind::BadInput, "main has no parameter '" + name + "'");
  return scope;
}

inline const FunDef& find_main(const Program& p) {
  if (auto f = p.function("main")) return *f;
  throw RuntimeError(RuntimeError::Kind::MissingMain, "program has no function 'main'");
}

}  // namespace eca
