#pragma once

#include "eca/hw/kv.hpp"
#include "eca/support/quantity.hpp"
#include "eca/support/value.hpp"
#include "eca/syntax/parser.hpp"
#include "eca/syntax/printer.hpp"
#include "eca/types/checker.hpp"

#include <deque>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eca {

/// Result of a transition's return clause: a literal or an echoed parameter.
struct ReturnSpec {
  std::optional<Value> literal;
  std::optional<std::size_t> param;
  std::string text;
};

struct Transition {
  std::string from;
  std::optional<Expr> guard;
  std::string guard_text;
  std::string to;
  Energy energy;
  std::optional<ReturnSpec> returns;
};

struct ComponentFunction {
  std::string name;
  std::vector<std::pair<std::string, Type>> params;
  Type returns_type = Type::void_();
  Duration time;
  std::vector<Transition> transitions;
};

struct ComponentModel {
  std::string name;
  std::vector<std::string> states;
  std::string initial;
  std::map<std::string, Power> power;
  std::map<std::string, ComponentFunction> functions;

  bool has_state(const std::string& s) const { return power.count(s) > 0; }

  const ComponentFunction* function(const std::string& f) const {
    auto it = functions.find(f);
    return it == functions.end() ? nullptr : &it->second;
  }

  /// The part of the model the type checker sees.
  ComponentSignature signature() const {
    ComponentSignature sig{name, {}};
    for (auto& [fname, fn] : functions) {
      FunctionSignature fs{{}, fn.returns_type};
      for (auto& [pname, pt] : fn.params) fs.params.push_back(pt);
      sig.functions[fname] = std::move(fs);
    }
    return sig;
  }

  /// Same model with every state's power multiplied by k.
  ComponentModel with_power_scaled(const Rational& k) const {
    ComponentModel m = *this;
    for (auto& [s, p] : m.power) p = p * k;
    return m;
  }
};

/// Component name to current state name (Γ).
using ComponentStates = std::map<std::string, std::string>;

struct ModelCheck {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

class ModelError : public std::runtime_error {
 public:
  explicit ModelError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& errors) {
    std::string s;
    for (auto& e : errors) s += (s.empty() ? "" : "\n") + e;
    return s;
  }
  std::vector<std::string> errors_;
};

class StepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepResult {
  std::string to;
  Energy energy;
  Duration duration;
  Value value;
};

namespace detail {

// Guards may use literals, int/bool parameters, comparisons and and/or.
// Returns the guard's type, or Unknown after reporting an error.
inline Type guard_type(const Expr& e, const ComponentFunction& fn, std::vector<std::string>& errors,
                       const std::string& where) {
  if (auto c = e.as<expr::Const>()) {
    if (c->value.is_float()) {
      errors.push_back(where + ": float literals are not allowed in guards");
      return Type::unknown();
    }
    return c->value.type();
  }
  if (auto v = e.as<expr::Var>()) {
    for (auto& [pname, pt] : fn.params) {
      if (pname != v->name) continue;
      if (pt.kind != Type::Kind::Float) return pt;
      errors.push_back(where + ": float parameter '" + pname + "' cannot be used in a guard");
      return Type::unknown();
    }
    errors.push_back(where + ": guard references unknown parameter '" + v->name + "'");
    return Type::unknown();
  }
  if (auto b = e.as<expr::BinOp>()) {
    Type l = guard_type(*b->lhs, fn, errors, where);
    Type r = guard_type(*b->rhs, fn, errors, where);
    if (is_arithmetic(b->op)) {
      errors.push_back(where + ": arithmetic is not allowed in guards");
      return Type::unknown();
    }
    if (!l.is_known() || !r.is_known()) return Type::bool_();
    std::string op = binary_op_text(b->op);
    bool ok;
    if (is_logical(b->op)) ok = l == Type::bool_() && r == Type::bool_();
    else if (b->op == BinaryOp::Eq || b->op == BinaryOp::Ne) ok = l == r;
    else ok = l == Type::int_() && r == Type::int_();
    if (!ok) errors.push_back(where + ": '" + op + "' cannot combine " + l.str() + " and " + r.str());
    return Type::bool_();
  }
  errors.push_back(where + ": unsupported guard expression");
  return Type::unknown();
}

inline void check_guard(const Expr& e, const ComponentFunction& fn, std::vector<std::string>& errors,
                        const std::string& where) {
  Type t = guard_type(e, fn, errors, where);
  if (t.is_known() && t != Type::bool_()) errors.push_back(where + ": guard has type " + t.str() + ", expected bool");
}

inline Value eval_guard(const Expr& e, const ComponentFunction& fn, const std::vector<Value>& args) {
  if (auto c = e.as<expr::Const>()) return c->value;
  if (auto v = e.as<expr::Var>()) {
    for (std::size_t i = 0; i < fn.params.size(); ++i)
      if (fn.params[i].first == v->name) return args.at(i);
    throw StepError("guard references unknown parameter '" + v->name + "'");
  }
  auto& b = *e.as<expr::BinOp>();
  Value l = eval_guard(*b.lhs, fn, args);
  Value r = eval_guard(*b.rhs, fn, args);
  switch (b.op) {
    case BinaryOp::And: return l.as_bool() && r.as_bool();
    case BinaryOp::Or: return l.as_bool() || r.as_bool();
    case BinaryOp::Eq: return l == r;
    case BinaryOp::Ne: return !(l == r);
    default: break;
  }
  if (!l.is_int() || !r.is_int()) throw StepError("guard compares non-integer values");
  const BigInt& a = l.as_int();
  const BigInt& c = r.as_int();
  switch (b.op) {
    case BinaryOp::Gt: return a > c;
    case BinaryOp::Ge: return a >= c;
    case BinaryOp::Le: return a <= c;
    case BinaryOp::Lt: return a < c;
    default: throw StepError("unsupported guard operator");
  }
}

inline std::string quantity_text(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw std::invalid_argument("expected a rational string");
}

template <class Q>
std::optional<Q> read_quantity(const nlohmann::json& table, const std::string& key, const std::string& where,
                               std::vector<std::string>& errors, bool required) {
  if (!table.contains(key)) {
    if (required) errors.push_back(where + ": missing '" + key + "'");
    return std::nullopt;
  }
  try {
    return Q(parse_rational(quantity_text(table.at(key))));
  } catch (const std::invalid_argument& e) {
    errors.push_back(where + "." + key + ": " + e.what());
    return std::nullopt;
  }
}

inline std::optional<std::string> read_string(const nlohmann::json& table, const std::string& key,
                                              const std::string& where, std::vector<std::string>& errors,
                                              bool required) {
  if (!table.contains(key)) {
    if (required) errors.push_back(where + ": missing '" + key + "'");
    return std::nullopt;
  }
  if (!table.at(key).is_string()) {
    errors.push_back(where + "." + key + ": expected a string");
    return std::nullopt;
  }
  return table.at(key).get<std::string>();
}

inline std::string scalar_text(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  return j.dump();
}

inline void reject_unknown_keys(const nlohmann::json& table, std::initializer_list<const char*> allowed,
                                const std::string& where, std::vector<std::string>& errors) {
  for (auto& [k, v] : table.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || k == a;
    if (!ok) errors.push_back(where + ": unknown key '" + k + "'");
  }
}

inline void load_function(const std::string& fname, const nlohmann::json& t, ComponentModel& m,
                          std::vector<std::string>& errors) {
  std::string where = "functions." + fname;
  ComponentFunction fn;
  fn.name = fname;
  if (!t.is_object()) {
    errors.push_back(where + ": expected a table");
    return;
  }
  reject_unknown_keys(t, {"params", "returns_type", "time", "transitions"}, where, errors);
  if (t.contains("params")) {
    std::set<std::string> seen;
    for (auto& p : t.at("params")) {
      auto pname = read_string(p, "name", where + ".params", errors, true);
      auto ptype = read_string(p, "type", where + ".params", errors, true);
      if (!pname || !ptype) continue;
      Type ty = primitive_type(*ptype);
      if (!ty.is_primitive()) errors.push_back(where + ": parameter '" + *pname + "' must be bool, int or float");
      if (!seen.insert(*pname).second) errors.push_back(where + ": duplicate parameter '" + *pname + "'");
      fn.params.emplace_back(*pname, ty);
    }
  }
  if (auto rt = read_string(t, "returns_type", where, errors, false)) {
    fn.returns_type = primitive_type(*rt);
    if (!fn.returns_type.is_known()) errors.push_back(where + ": returns_type must be void, bool, int or float");
  }
  if (auto d = read_quantity<Duration>(t, "time", where, errors, false)) fn.time = *d;

  if (t.contains("transitions")) {
    std::size_t index = 0;
    for (auto& tr : t.at("transitions")) {
      std::string tw = where + ".transitions[" + std::to_string(index++) + "]";
      reject_unknown_keys(tr, {"from", "guard", "to", "energy", "returns"}, tw, errors);
      Transition x;
      x.from = read_string(tr, "from", tw, errors, true).value_or("");
      x.to = read_string(tr, "to", tw, errors, true).value_or("");
      if (auto e = read_quantity<Energy>(tr, "energy", tw, errors, false)) x.energy = *e;
      if (auto g = read_string(tr, "guard", tw, errors, false)) {
        try {
          x.guard = parse_expression(*g);
          x.guard_text = pretty_print(*x.guard);
          check_guard(*x.guard, fn, errors, tw);
        } catch (const SourceError& e) {
          errors.push_back(tw + ".guard: " + e.what());
        }
      }
      if (tr.contains("returns")) {
        ReturnSpec spec;
        spec.text = scalar_text(tr.at("returns"));
        for (std::size_t i = 0; i < fn.params.size(); ++i)
          if (tr.at("returns").is_string() && fn.params[i].first == spec.text) spec.param = i;
        if (spec.param) {
          if (fn.params[*spec.param].second != fn.returns_type)
            errors.push_back(tw + ": returned parameter '" + spec.text + "' does not have type " + fn.returns_type.str());
        } else if (fn.returns_type.kind == Type::Kind::Void) {
          errors.push_back(tw + ": void function cannot return a value");
        } else if (auto lit = parse_literal(spec.text, fn.returns_type)) {
          spec.literal = *lit;
        } else {
          errors.push_back(tw + ": return '" + spec.text + "' is not a " + fn.returns_type.str() + " literal or parameter");
        }
        x.returns = std::move(spec);
      } else if (fn.returns_type.kind != Type::Kind::Void && fn.returns_type.is_known()) {
        errors.push_back(tw + ": missing 'returns' for a function returning " + fn.returns_type.str());
      }
      fn.transitions.push_back(std::move(x));
    }
  }
  m.functions[fname] = std::move(fn);
}

}  // namespace detail

/// Semantic checks on a structurally loaded model.
inline ModelCheck validate(const ComponentModel& m) {
  ModelCheck out;
  if (!m.has_state(m.initial)) out.errors.push_back("initial state '" + m.initial + "' is not declared");
  for (auto& [s, p] : m.power)
    if (p.negative()) out.errors.push_back("state '" + s + "' has negative power " + p.str());

  std::map<std::string, std::set<std::string>> successors;
  for (auto& [fname, fn] : m.functions) {
    std::string where = "function '" + fname + "'";
    if (fn.time.negative()) out.errors.push_back(where + " has negative time " + fn.time.str());
    std::set<std::pair<std::string, std::string>> seen;
    std::set<std::string> sources;
    for (auto& t : fn.transitions) {
      if (!m.has_state(t.from)) out.errors.push_back(where + ": transition from undeclared state '" + t.from + "'");
      if (!m.has_state(t.to)) out.errors.push_back(where + ": transition to undeclared state '" + t.to + "'");
      if (t.energy.negative())
        out.errors.push_back(where + ": transition " + t.from + " -> " + t.to + " has negative energy " + t.energy.str());
      if (t.guard) {
        std::vector<std::string> guard_errors;
        detail::check_guard(*t.guard, fn, guard_errors, where);
        out.errors.insert(out.errors.end(), guard_errors.begin(), guard_errors.end());
      }
      if (!seen.insert({t.from, t.guard_text}).second)
        out.errors.push_back(where + ": duplicate transition from '" + t.from + "'" +
                             (t.guard_text.empty() ? "" : " with guard '" + t.guard_text + "'"));
      sources.insert(t.from);
      successors[t.from].insert(t.to);
    }
    std::string missing;
    for (auto& s : m.states)
      if (!sources.count(s)) missing += (missing.empty() ? "" : ", ") + s;
    if (!missing.empty()) out.warnings.push_back(where + " is partial: no transition from " + missing);
  }

  std::set<std::string> reached;
  if (m.has_state(m.initial)) {
    std::deque<std::string> work{m.initial};
    reached.insert(m.initial);
    while (!work.empty()) {
      auto s = work.front();
      work.pop_front();
      for (auto& n : successors[s])
        if (reached.insert(n).second) work.push_back(n);
    }
  }
  for (auto& s : m.states) {
    if (successors[s].empty()) out.warnings.push_back("state '" + s + "' has no outgoing transitions");
    if (m.has_state(m.initial) && !reached.count(s)) out.warnings.push_back("state '" + s + "' is unreachable from '" + m.initial + "'");
  }
  return out;
}

struct ModelLoad {
  std::optional<ComponentModel> model;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return model.has_value(); }
};

/// Loads and validates a model file. `model` is empty iff `errors` is not.
inline ModelLoad load_model(std::string_view text) {
  ModelLoad out;
  nlohmann::json doc;
  try {
    doc = kv::parse(text);
  } catch (const kv::SyntaxError& e) {
    out.errors.push_back(e.what());
    return out;
  }
  auto& errors = out.errors;
  ComponentModel m;
  detail::reject_unknown_keys(doc, {"name", "initial", "states", "functions"}, "model", errors);
  m.name = detail::read_string(doc, "name", "model", errors, true).value_or("");
  m.initial = detail::read_string(doc, "initial", "model", errors, true).value_or("");
  if (!m.name.empty() && !std::isalpha(static_cast<unsigned char>(m.name.front())) && m.name.front() != '_')
    errors.push_back("model: name '" + m.name + "' is not an identifier");

  if (!doc.contains("states") || !doc.at("states").is_object() || doc.at("states").empty()) {
    errors.push_back("model: at least one [states.<name>] section is required");
  } else {
    for (auto& [s, t] : doc.at("states").items()) {
      m.states.push_back(s);
      detail::reject_unknown_keys(t, {"power"}, "states." + s, errors);
      m.power[s] = detail::read_quantity<Power>(t, "power", "states." + s, errors, true).value_or(Power());
    }
  }
  if (doc.contains("functions"))
    for (auto& [f, t] : doc.at("functions").items()) detail::load_function(f, t, m, errors);

  if (!errors.empty()) return out;
  auto check = validate(m);
  out.errors = std::move(check.errors);
  out.warnings = std::move(check.warnings);
  if (out.errors.empty()) out.model = std::move(m);
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads a model file, throwing ModelError with every error prefixed by the path.
inline ComponentModel load_model_file(const std::string& path) {
  auto loaded = load_model(read_file(path));
  if (!loaded.ok()) {
    for (auto& e : loaded.errors) e = path + ": " + e;
    throw ModelError(loaded.errors);
  }
  return std::move(*loaded.model);
}

/// Fires the first transition from `state` whose guard holds for `args`.
inline StepResult step(const ComponentModel& m, const std::string& state, const std::string& fun,
                       const std::vector<Value>& args) {
  const ComponentFunction* fn = m.function(fun);
  if (!fn) throw StepError("component '" + m.name + "' has no function '" + fun + "'");
  if (!m.has_state(state)) throw StepError("component '" + m.name + "' has no state '" + state + "'");
  if (args.size() != fn->params.size())
    throw StepError(m.name + "::" + fun + " expects " + std::to_string(fn->params.size()) + " argument(s)");
  for (auto& t : fn->transitions) {
    if (t.from != state) continue;
    if (t.guard && !detail::eval_guard(*t.guard, *fn, args).as_bool()) continue;
    Value v = Value::unit();
    if (t.returns) v = t.returns->param ? args[*t.returns->param] : *t.returns->literal;
    return StepResult{t.to, t.energy, fn->time, v};
  }
  throw StepError("no matching transition for " + m.name + "::" + fun + " in state '" + state + "'");
}

inline Power power_draw(const ComponentModel& m, const std::string& state) {
  auto it = m.power.find(state);
  if (it == m.power.end()) throw std::out_of_range("component '" + m.name + "' has no state '" + state + "'");
  return it->second;
}

/// The models used by one analysis, keyed by component name.
class ModelSet {
 public:
  ModelSet() = default;
  explicit ModelSet(std::vector<ComponentModel> models) {
    for (auto& m : models) add(std::move(m));
  }

  void add(ComponentModel m) {
    std::string name = m.name;
    if (!models_.emplace(name, std::move(m)).second) throw ModelError({"duplicate component '" + name + "'"});
  }

  const ComponentModel* find(const std::string& name) const {
    auto it = models_.find(name);
    return it == models_.end() ? nullptr : &it->second;
  }
  const ComponentModel& at(const std::string& name) const {
    if (auto m = find(name)) return *m;
    throw std::out_of_range("unknown component '" + name + "'");
  }

  const std::map<std::string, ComponentModel>& models() const { return models_; }
  bool empty() const { return models_.empty(); }

  ComponentStates initial_states() const {
    ComponentStates g;
    for (auto& [n, m] : models_) g[n] = m.initial;
    return g;
  }

  std::vector<ComponentSignature> signatures() const {
    std::vector<ComponentSignature> out;
    for (auto& [n, m] : models_) out.push_back(m.signature());
    return out;
  }

  ModelSet with_power_scaled(const Rational& k) const {
    ModelSet s;
    for (auto& [n, m] : models_) s.models_.emplace(n, m.with_power_scaled(k));
    return s;
  }

 private:
  std::map<std::string, ComponentModel> models_;
};

/// Φ(Γ): the summed power draw of every component in its current state.
inline Power phi_total(const ModelSet& models, const ComponentStates& gamma) {
  Power total;
  for (auto& [name, m] : models.models()) {
    auto it = gamma.find(name);
    if (it == gamma.end()) throw std::out_of_range("no state for component '" + name + "'");
    total += power_draw(m, it->second);
  }
  return total;
}

}  // namespace eca
