#pragma once

#include "eca/interp/runtime.hpp"
#include "eca/transform/transform.hpp"

#include <unordered_map>

namespace eca {

/// Global state: G and Γ.
struct GState {
  GlobalState globals;
  ComponentStates components;

  friend bool operator==(const GState&, const GState&) = default;
};

/// (PState, GState), the input and output of state updates.
struct StatePair {
  LocalState ps;
  GState gs;

  friend bool operator==(const StatePair&, const StatePair&) = default;
};

namespace detail {

struct MemoKey {
  const Term* node;
  StatePair state;
  std::size_t hash;

  friend bool operator==(const MemoKey& a, const MemoKey& b) {
    return a.node == b.node && a.hash == b.hash && a.state == b.state;
  }
};

struct MemoHash {
  std::size_t operator()(const MemoKey& k) const { return k.hash; }
};

}  // namespace detail

/// Evaluates terms of one Analysis against concrete models and timings.
/// Value and state results of heavy subterms are memoized per input state;
/// energies are not, so trace events come out once each, in execution order.
class Evaluator {
 public:
  Evaluator(const Analysis& analysis, const ModelSet& models, const TimingTable& timing, RunOptions options = {})
      : analysis_(&analysis), models_(&models), timing_(&timing), options_(options), meter_(models, options.record_trace) {}

  Value value(const Term& t, const LocalState& ps, const GState& gs) {
    if (!t.heavy) return value_uncached(t, ps, gs);
    detail::MemoKey key = make_key(t, ps, gs);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    Value v = value_uncached(t, ps, gs);
    values_.emplace(std::move(key), v);
    return v;
  }

  StatePair state(const Term& t, const LocalState& ps, const GState& gs) {
    if (!t.heavy) return state_uncached(t, ps, gs);
    detail::MemoKey key = make_key(t, ps, gs);
    if (auto it = states_.find(key); it != states_.end()) return it->second;
    StatePair s = state_uncached(t, ps, gs);
    states_.emplace(std::move(key), s);
    return s;
  }

  Energy energy(const Term& t, const LocalState& ps, const GState& gs) {
    switch (t.kind) {
      case TermKind::ZeroE: return Energy();
      case TermKind::TdEc: return time_draw(t, gs);
      case TermKind::Plus: {
        Energy a = energy(*t.kids[0], ps, gs);
        return a + energy(*t.kids[1], ps, gs);
      }
      case TermKind::Compose: {
        StatePair s = state(*t.kids[0], ps, gs);
        return energy(*t.kids[1], s.ps, s.gs);
      }
      case TermKind::CmpEnergy: {
        std::string from = gs.components.at(t.name);
        StepResult r = fire(t, ps, gs);
        return meter_.transition(t.name, t.function, from, r.to, r.energy);
      }
      case TermKind::Subst: {
        Depth d(*this, t.name);
        return energy(*t.kids[0], ps, gs);
      }
      case TermKind::Rec: return energy(*resolve(t), ps, gs);
      case TermKind::Cond: return energy(*t.kids[value(*t.kids[0], ps, gs).as_bool() ? 1 : 2], ps, gs);
      case TermKind::Block: {
        LocalState inner = ps;
        inner.push();
        return energy(*t.kids[0], inner, gs);
      }
      case TermKind::Loop: return loop_energy(t, ps, gs);
      default: throw std::logic_error("term is not an energy function");
    }
  }

  EnergyMeter& meter() { return meter_; }

 private:
  // Tracks call depth across Subst unfoldings.
  struct Depth {
    Depth(Evaluator& e, const std::string& f) : e_(e) {
      if (++e_.depth_ > e_.options_.recursion_limit) {
        --e_.depth_;
        throw recursion_limit_error(e_.options_.recursion_limit, f);
      }
    }
    ~Depth() { --e_.depth_; }
    Depth(const Depth&) = delete;
    Depth& operator=(const Depth&) = delete;
    Evaluator& e_;
  };

  detail::MemoKey make_key(const Term& t, const LocalState& ps, const GState& gs) const {
    std::size_t h = std::hash<const void*>{}(&t);
    h = hash_combine(h, hash_value(ps));
    h = hash_combine(h, hash_value(gs.globals));
    h = hash_combine(h, hash_value(gs.components));
    return detail::MemoKey{&t, StatePair{ps, gs}, h};
  }

  const Term* resolve(const Term& rec) const {
    const FunctionTerms* f = analysis_->function(rec.name);
    if (!f) throw RuntimeError(RuntimeError::Kind::UnboundVariable, "unknown function '" + rec.name + "'");
    return f->subst(rec.sort).get();
  }

  std::vector<Value> component_args(const Term& t, const LocalState& ps) const {
    std::vector<Value> args;
    for (auto& n : t.names) {
      const Value* v = ps.find(n);
      if (!v) throw RuntimeError(RuntimeError::Kind::UnboundVariable, "unbound argument '" + n + "'");
      args.push_back(*v);
    }
    return args;
  }

  StepResult fire(const Term& t, const LocalState& ps, const GState& gs) const {
    try {
      return step(models_->at(t.name), gs.components.at(t.name), t.function, component_args(t, ps));
    } catch (const StepError& e) {
      throw RuntimeError(RuntimeError::Kind::Step, e.what());
    }
  }

  Energy time_draw(const Term& t, const GState& gs) {
    if (!t.component_time) return meter_.time_draw(std::string(timing_key(t.construct)), (*timing_)[t.construct], gs.components);
    const ComponentFunction* fn = models_->at(t.name).function(t.function);
    if (!fn) throw RuntimeError(RuntimeError::Kind::Step, "component '" + t.name + "' has no function '" + t.function + "'");
    return meter_.time_draw(t.name + "::" + t.function, fn->time, gs.components);
  }

  Value value_uncached(const Term& t, const LocalState& ps, const GState& gs) {
    switch (t.kind) {
      case TermKind::ConstV: return t.value;
      case TermKind::Lookup: {
        if (auto v = ps.find(t.name)) return *v;
        if (auto g = gs.globals.find(t.name); g != gs.globals.end()) return g->second;
        throw RuntimeError(RuntimeError::Kind::UnboundVariable, "unbound variable '" + t.name + "'");
      }
      case TermKind::Compose: {
        StatePair s = state(*t.kids[0], ps, gs);
        return value(*t.kids[1], s.ps, s.gs);
      }
      case TermKind::BinOpNode: {
        Value l = value(*t.kids[0], ps, gs);
        return apply_binop(t.op, l, value(*t.kids[1], ps, gs));
      }
      case TermKind::FieldV: return field_of(value(*t.kids[0], ps, gs), t.name);
      case TermKind::ConstructV: {
        std::vector<std::pair<std::string, Value>> fields;
        for (std::size_t i = 0; i < t.kids.size(); ++i) fields.emplace_back(t.names.at(i), value(*t.kids[i], ps, gs));
        return make_struct(t.name, std::move(fields));
      }
      case TermKind::CmpValue: return fire(t, ps, gs).value;
      case TermKind::Subst: {
        Depth d(*this, t.name);
        return value(*t.kids[0], ps, gs);
      }
      case TermKind::Rec: return value(*resolve(t), ps, gs);
      default: throw std::logic_error("term is not a value function");
    }
  }

  StatePair state_uncached(const Term& t, const LocalState& ps, const GState& gs) {
    switch (t.kind) {
      case TermKind::Id: return {ps, gs};
      case TermKind::Update: {
        Value v = value(*t.kids[0], ps, gs);
        StatePair s = state(*t.kids[1], ps, gs);
        if (t.mode == UpdateMode::Declare) {
          s.ps.declare(t.name, std::move(v));
        } else if (t.mode == UpdateMode::DefineGlobal) {
          s.gs.globals[t.name] = std::move(v);
        } else if (Value* local = s.ps.find(t.name)) {
          *local = std::move(v);
        } else {
          s.gs.globals[t.name] = std::move(v);
        }
        return s;
      }
      case TermKind::Compose: {
        StatePair s = state(*t.kids[0], ps, gs);
        return state(*t.kids[1], s.ps, s.gs);
      }
      case TermKind::Scope: {
        std::map<std::string, Value> bound;
        for (std::size_t i = 0; i < t.names.size(); ++i) bound[t.names[i]] = value(*t.kids[i + 1], ps, gs);
        return {LocalState(std::move(bound)), state(*t.kids[0], ps, gs).gs};
      }
      case TermKind::Split: {
        StatePair locals = state(*t.kids[0], ps, gs);
        StatePair globals = state(*t.kids[1], ps, gs);
        return {std::move(locals.ps), std::move(globals.gs)};
      }
      case TermKind::CmpEffect: {
        StepResult r = fire(t, ps, gs);
        StatePair s{ps, gs};
        s.gs.components[t.name] = r.to;
        return s;
      }
      case TermKind::Subst: {
        Depth d(*this, t.name);
        return state(*t.kids[0], ps, gs);
      }
      case TermKind::Rec: return state(*resolve(t), ps, gs);
      case TermKind::Cond: return state(*t.kids[value(*t.kids[0], ps, gs).as_bool() ? 1 : 2], ps, gs);
      case TermKind::Block: {
        LocalState inner = ps;
        inner.push();
        StatePair s = state(*t.kids[0], inner, gs);
        s.ps.pop();
        return s;
      }
      case TermKind::Loop: return loop_state(t, ps, gs);
      default: throw std::logic_error("term is not a state update");
    }
  }

  // Loop kids: cond V, cond Σ, cond E, body Σ, body E. For repeat the
  // "cond" terms are the count expression, evaluated once.
  BigInt repeat_count(const Term& t, const LocalState& ps, const GState& gs) {
    BigInt n = value(*t.kids[0], ps, gs).as_int();
    if (n < 0) throw negative_repeat_error(n);
    return n;
  }

  StatePair loop_state(const Term& t, const LocalState& ps, const GState& gs) {
    if (t.loop == LoopMode::Repeat) {
      BigInt n = repeat_count(t, ps, gs);
      StatePair s = state(*t.kids[1], ps, gs);
      for (BigInt k = 0; k < n; ++k) s = state(*t.kids[3], s.ps, s.gs);
      return s;
    }
    StatePair s{ps, gs};
    for (;;) {
      bool go = value(*t.kids[0], s.ps, s.gs).as_bool();
      s = state(*t.kids[1], s.ps, s.gs);
      if (!go) return s;
      s = state(*t.kids[3], s.ps, s.gs);
    }
  }

  Energy loop_energy(const Term& t, const LocalState& ps, const GState& gs) {
    Energy total;
    if (t.loop == LoopMode::Repeat) {
      BigInt n = repeat_count(t, ps, gs);
      StatePair s = state(*t.kids[1], ps, gs);
      for (BigInt k = 0; k < n; ++k) {
        total += energy(*t.kids[4], s.ps, s.gs);
        s = state(*t.kids[3], s.ps, s.gs);
      }
      return total;
    }
    StatePair s{ps, gs};
    for (;;) {
      total += energy(*t.kids[2], s.ps, s.gs);
      bool go = value(*t.kids[0], s.ps, s.gs).as_bool();
      s = state(*t.kids[1], s.ps, s.gs);
      if (!go) return total;
      total += energy(*t.kids[4], s.ps, s.gs);
      s = state(*t.kids[3], s.ps, s.gs);
    }
  }

  const Analysis* analysis_;
  const ModelSet* models_;
  const TimingTable* timing_;
  RunOptions options_;
  EnergyMeter meter_;
  std::size_t depth_ = 0;
  std::unordered_map<detail::MemoKey, Value, detail::MemoHash> values_;
  std::unordered_map<detail::MemoKey, StatePair, detail::MemoHash> states_;
};

/// Evaluates the whole-program terms: E first, then Σ, then V, from
/// ps = [inputs] and gs = (default globals, initial component states).
inline RunResult evaluate(const Analysis& a, const ModelSet& models, const TimingTable& timing, const Inputs& inputs,
                          RunOptions options = {}) {
  if (!a.has_main) throw RuntimeError(RuntimeError::Kind::MissingMain, "program has no function 'main'");
  LocalState ps(bind_main_inputs(a.main_params, inputs));
  GState gs{a.default_globals, models.initial_states()};
  Evaluator ev(a, models, timing, options);
  Energy e = ev.energy(*a.program_energy, ps, gs);
  StatePair final_state = ev.state(*a.program_state, ps, gs);
  Value v = ev.value(*a.program_value, ps, gs);
  if (!(e == ev.meter().total())) throw std::logic_error("energy term disagrees with its own trace");

  RunResult r;
  r.value = std::move(v);
  r.final_locals = std::move(final_state.ps);
  r.final_globals = std::move(final_state.gs.globals);
  r.final_components = std::move(final_state.gs.components);
  r.energy = e;
  r.transition_energy = ev.meter().transition_total();
  r.time_draw_energy = ev.meter().time_draw_total();
  r.per_component = ev.meter().per_component();
  r.trace = std::move(ev.meter().trace());
  return r;
}

}  // namespace eca
