#pragma once

#include "eca/interp/runtime.hpp"
#include "eca/types/checker.hpp"

#include <string>
#include <vector>

namespace eca {

/// σ, G and Γ together.
struct MachineState {
  LocalState locals;
  GlobalState globals;
  ComponentStates components;
};

/// Energy-aware reference interpreter over a type-checked program.
class Interpreter {
 public:
  Interpreter(const TypedProgram& program, const ModelSet& models, const TimingTable& timing, RunOptions options = {})
      : program_(&program), models_(&models), timing_(&timing), options_(options), meter_(models, options.record_trace) {}

  Value eval(const Expr& e, MachineState& m) {
    return std::visit([&](const auto& n) { return eval_node(n, m); }, e.node);
  }

  void exec(const Stmt& s, MachineState& m) {
    std::visit([&](const auto& n) { exec_node(n, m); }, s.node);
  }

  /// Calls a language function with already evaluated arguments.
  Value call(const std::string& name, std::vector<Value> args, MachineState& m) {
    const FunDef* f = program_->function(name);
    if (!f) throw RuntimeError(RuntimeError::Kind::UnboundVariable, "unknown function '" + name + "'");
    if (++depth_ > options_.recursion_limit) throw recursion_limit_error(options_.recursion_limit, name);
    charge(Construct::Call, m);
    std::map<std::string, Value> scope;
    for (std::size_t i = 0; i < f->params.size(); ++i) scope[f->params[i].name] = std::move(args[i]);
    LocalState caller = std::exchange(m.locals, LocalState(std::move(scope)));
    Value v = eval(f->body, m);
    m.locals = std::move(caller);
    --depth_;
    return f->return_type.kind == Type::Kind::Void ? Value::unit() : v;
  }

  /// Default-initializes every global, then runs the initializers in order.
  void init_globals(MachineState& m) {
    for (auto& g : program_->program.globals) m.globals[g.name] = default_of(g.type);
    for (auto& g : program_->program.globals) {
      LocalState outer = std::exchange(m.locals, LocalState(std::map<std::string, Value>{}));
      Value v = eval(g.init, m);
      charge(Construct::Decl, m);
      m.globals[g.name] = std::move(v);
      m.locals = std::move(outer);
    }
  }

  /// Runs main with `inputs`; `m` must hold the initial component states.
  Value run_main(const Inputs& inputs, MachineState& m) {
    const FunDef& main = find_main(program_->program);
    auto scope = bind_main_inputs(main.params, inputs);
    init_globals(m);
    std::vector<Value> args;
    for (auto& p : main.params) args.push_back(scope.at(p.name));
    // main's locals are the final σ, so run its body inline rather than via call().
    if (++depth_ > options_.recursion_limit) throw recursion_limit_error(options_.recursion_limit, "main");
    charge(Construct::Call, m);
    m.locals = LocalState(std::move(scope));
    Value v = eval(main.body, m);
    --depth_;
    return main.return_type.kind == Type::Kind::Void ? Value::unit() : v;
  }

  EnergyMeter& meter() { return meter_; }

 private:
  void charge(Construct c, const MachineState& m) {
    meter_.time_draw(std::string(timing_key(c)), (*timing_)[c], m.components);
  }

  Value default_of(const Type& t) const {
    return default_value(t, [&](const std::string& s) -> const StructLayout& { return resolve_struct(*program_, s); });
  }

  std::vector<Value> eval_args(const std::vector<Expr>& args, MachineState& m) {
    std::vector<Value> out;
    out.reserve(args.size());
    for (auto& a : args) out.push_back(eval(a, m));
    return out;
  }

  Value eval_node(const expr::Const& c, MachineState& m) {
    if (!c.implicit) charge(Construct::Const, m);
    return c.value;
  }

  Value eval_node(const expr::Var& v, MachineState& m) {
    charge(Construct::Var, m);
    if (auto local = m.locals.find(v.name)) return *local;
    if (auto g = m.globals.find(v.name); g != m.globals.end()) return g->second;
    throw RuntimeError(RuntimeError::Kind::UnboundVariable, "unbound variable '" + v.name + "'");
  }

  Value eval_node(const expr::BinOp& b, MachineState& m) {
    Value l = eval(*b.lhs, m);
    Value r = eval(*b.rhs, m);
    charge(Construct::BinOp, m);
    return apply_binop(b.op, l, r);
  }

  Value eval_node(const expr::Construct& c, MachineState& m) {
    auto values = eval_args(c.args, m);
    charge(Construct::Construct, m);
    auto& layout = resolve_struct(*program_, c.struct_name);
    std::vector<std::pair<std::string, Value>> fields;
    for (std::size_t i = 0; i < layout.size(); ++i) fields.emplace_back(layout[i].first, std::move(values[i]));
    return make_struct(c.struct_name, std::move(fields));
  }

  Value eval_node(const expr::FieldAccess& f, MachineState& m) {
    Value base = eval(*f.base, m);
    charge(Construct::FieldAccess, m);
    return field_of(base, f.field);
  }

  Value eval_node(const expr::Decl& d, MachineState& m) {
    Value v = eval(*d.init, m);
    charge(Construct::Decl, m);
    m.locals.declare(d.name, v);
    return v;
  }

  Value eval_node(const expr::Assign& a, MachineState& m) {
    Value v = eval(*a.value, m);
    charge(Construct::Assign, m);
    if (auto local = m.locals.find(a.name)) *local = v;
    else m.globals[a.name] = v;
    return v;
  }

  Value eval_node(const expr::ComponentCall& c, MachineState& m) {
    auto args = eval_args(c.args, m);
    const ComponentModel& model = models_->at(c.component);
    std::string& state = m.components.at(c.component);
    StepResult r;
    try {
      r = step(model, state, c.function, args);
    } catch (const StepError& e) {
      throw RuntimeError(RuntimeError::Kind::Step, e.what());
    }
    meter_.time_draw(c.component + "::" + c.function, r.duration, m.components);
    meter_.transition(c.component, c.function, state, r.to, r.energy);
    state = r.to;
    return r.value;
  }

  Value eval_node(const expr::Call& c, MachineState& m) { return call(c.function, eval_args(c.args, m), m); }

  Value eval_node(const expr::Comma& c, MachineState& m) {
    if (auto k = c.result->as<expr::Const>(); k && k->implicit) {
      exec(*c.first, m);
      return Value::unit();
    }
    charge(Construct::Seq, m);
    exec(*c.first, m);
    return eval(*c.result, m);
  }

  void in_child_scope(const Stmt& s, MachineState& m) {
    m.locals.push();
    exec(s, m);
    m.locals.pop();
  }

  void exec_node(const stmt::Skip&, MachineState& m) { charge(Construct::Skip, m); }

  void exec_node(const stmt::Seq& s, MachineState& m) {
    charge(Construct::Seq, m);
    exec(*s.first, m);
    exec(*s.second, m);
  }

  void exec_node(const stmt::ExprStmt& s, MachineState& m) { eval(s.expr, m); }

  void exec_node(const stmt::If& s, MachineState& m) {
    bool c = eval(s.cond, m).as_bool();
    charge(Construct::If, m);
    if (c) in_child_scope(*s.then_branch, m);
    else if (s.else_branch) in_child_scope(**s.else_branch, m);
  }

  void exec_node(const stmt::While& s, MachineState& m) {
    charge(Construct::While, m);
    while (eval(s.cond, m).as_bool()) in_child_scope(*s.body, m);
  }

  void exec_node(const stmt::Repeat& s, MachineState& m) {
    BigInt n = eval(s.count, m).as_int();
    if (n < 0) throw negative_repeat_error(n);
    charge(Construct::Repeat, m);
    for (BigInt k = 0; k < n; ++k) in_child_scope(*s.body, m);
  }

  const TypedProgram* program_;
  const ModelSet* models_;
  const TimingTable* timing_;
  RunOptions options_;
  EnergyMeter meter_;
  std::size_t depth_ = 0;
};

inline RunResult finish(Value v, MachineState m, EnergyMeter& meter) {
  RunResult r;
  r.value = std::move(v);
  r.final_locals = std::move(m.locals);
  r.final_globals = std::move(m.globals);
  r.final_components = std::move(m.components);
  r.energy = meter.total();
  r.transition_energy = meter.transition_total();
  r.time_draw_energy = meter.time_draw_total();
  r.per_component = meter.per_component();
  r.trace = std::move(meter.trace());
  return r;
}

/// Evaluates one expression from the given state.
inline RunResult eval_expr(const TypedProgram& program, const Expr& e, MachineState m, const ModelSet& models,
                           const TimingTable& timing, RunOptions options = {}) {
  Interpreter in(program, models, timing, options);
  Value v = in.eval(e, m);
  return finish(std::move(v), std::move(m), in.meter());
}

/// Executes one statement from the given state; the value is unit.
inline RunResult exec_stmt(const TypedProgram& program, const Stmt& s, MachineState m, const ModelSet& models,
                           const TimingTable& timing, RunOptions options = {}) {
  Interpreter in(program, models, timing, options);
  in.exec(s, m);
  return finish(Value::unit(), std::move(m), in.meter());
}

/// Calls `f` with `args`; caller locals in `m` are restored afterwards.
inline RunResult call_function(const TypedProgram& program, const std::string& f, std::vector<Value> args,
                               MachineState m, const ModelSet& models, const TimingTable& timing,
                               RunOptions options = {}) {
  Interpreter in(program, models, timing, options);
  Value v = in.call(f, std::move(args), m);
  return finish(std::move(v), std::move(m), in.meter());
}

/// Runs a whole program: Γ starts at each model's initial state, globals
/// initialize in order, then main runs with `inputs`.
inline RunResult run(const TypedProgram& program, const ModelSet& models, const TimingTable& timing,
                     const Inputs& inputs, RunOptions options = {}) {
  Interpreter in(program, models, timing, options);
  MachineState m;
  m.components = models.initial_states();
  Value v = in.run_main(inputs, m);
  return finish(std::move(v), std::move(m), in.meter());
}

}  // namespace eca
