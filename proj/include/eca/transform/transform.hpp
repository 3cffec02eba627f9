#pragma once

#include "eca/hw/model.hpp"
#include "eca/interp/runtime.hpp"
#include "eca/transform/term.hpp"
#include "eca/types/checker.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace eca {

/// (V, Σ, E) of an expression.
struct ExprTerms {
  TermPtr value, state, energy;
};

/// (Σ, E) of a statement.
struct StmtTerms {
  TermPtr state, energy;
};

/// Installed judgment of a language function, plus the Subst nodes that
/// call sites and Rec placeholders refer to.
struct FunctionTerms {
  std::string name;
  std::vector<std::string> params;
  TermPtr value, state, energy;
  TermPtr subst_value, subst_state, subst_energy;

  const TermPtr& subst(Sort s) const {
    return s == Sort::Value ? subst_value : s == Sort::State ? subst_state : subst_energy;
  }
};

struct GlobalTerms {
  std::string name;
  TermPtr state;   // runs the initializer in a fresh scope and defines the global
  TermPtr energy;  // from the same input state
};

struct Analysis {
  std::map<std::string, FunctionTerms> functions;
  std::vector<std::string> function_order;
  std::vector<GlobalTerms> globals;
  TermPtr init_state, init_energy;
  TermPtr program_value, program_state, program_energy;
  bool has_main = false;
  std::vector<Param> main_params;
  GlobalState default_globals;
  std::set<std::string> components_used;

  const FunctionTerms* function(const std::string& name) const {
    auto it = functions.find(name);
    return it == functions.end() ? nullptr : &it->second;
  }
};

namespace detail {

class Transformer {
 public:
  Transformer(const TypedProgram& program, const ModelSet* models) : program_(&program), models_(models) {}

  ExprTerms expr(const Expr& e) {
    return std::visit([&](const auto& n) { return node(n); }, e.node);
  }

  StmtTerms stmt(const Stmt& s) {
    return std::visit([&](const auto& n) { return node(n); }, s.node);
  }

  /// Transforms each function in definition order; a call to a function that
  /// is not yet installed (itself, or one defined later) gets Rec placeholders.
  void install_functions(Analysis& a) {
    for (auto& f : program_->program.functions) {
      if (a.functions.count(f.name)) continue;
      ExprTerms body = expr(f.body);
      FunctionTerms ft;
      ft.name = f.name;
      for (auto& p : f.params) ft.params.push_back(p.name);
      ft.value = f.return_type.kind == Type::Kind::Void ? term::const_v(Value::unit()) : body.value;
      ft.state = body.state;
      ft.energy = body.energy;
      ft.subst_value = term::subst(f.name, ft.value);
      ft.subst_state = term::subst(f.name, ft.state);
      ft.subst_energy = term::subst(f.name, ft.energy);
      a.functions[f.name] = ft;
      a.function_order.push_back(f.name);
      installed_[f.name] = ft;
    }
    a.components_used = components_used_;
  }

 private:
  struct Args {
    TermPtr state, energy;
    std::vector<TermPtr> values;
  };

  // Arguments left to right: each V_i sees the state after the earlier Σs.
  Args args(const std::vector<Expr>& list) {
    std::vector<ExprTerms> ts;
    for (auto& a : list) ts.push_back(expr(a));
    Args out;
    TermPtr prefix;
    for (auto& t : ts) {
      out.values.push_back(prefix ? term::compose(prefix, t.value) : t.value);
      prefix = prefix ? term::compose(prefix, t.state) : t.state;
    }
    out.state = ts.empty() ? term::id() : ts.back().state;
    out.energy = ts.empty() ? term::zero() : ts.back().energy;
    for (std::size_t i = ts.size(); i-- > 1;) {
      out.state = term::compose(ts[i - 1].state, out.state);
      out.energy = term::plus(ts[i - 1].energy, term::compose(ts[i - 1].state, out.energy));
    }
    return out;
  }

  static TermPtr after(const TermPtr& energy, const TermPtr& state, TermPtr next) {
    return term::plus(energy, term::compose(state, std::move(next)));
  }

  ExprTerms node(const expr::Const& c) {
    if (c.implicit) return {term::const_v(c.value), term::id(), term::zero()};
    return {term::const_v(c.value), term::id(), term::td(Construct::Const)};
  }

  ExprTerms node(const expr::Var& v) { return {term::lookup(v.name), term::id(), term::td(Construct::Var)}; }

  ExprTerms node(const expr::BinOp& b) {
    ExprTerms l = expr(*b.lhs);
    ExprTerms r = expr(*b.rhs);
    return {term::binop(b.op, l.value, term::compose(l.state, r.value)), term::compose(l.state, r.state),
            after(l.energy, l.state, after(r.energy, r.state, term::td(Construct::BinOp)))};
  }

  ExprTerms node(const expr::Construct& c) {
    Args a = args(c.args);
    std::vector<std::string> fields;
    for (auto& [name, type] : resolve_struct(*program_, c.struct_name)) fields.push_back(name);
    return {term::construct(c.struct_name, std::move(fields), a.values), a.state,
            after(a.energy, a.state, term::td(Construct::Construct))};
  }

  ExprTerms node(const expr::FieldAccess& f) {
    ExprTerms b = expr(*f.base);
    return {term::field(b.value, f.field), b.state, after(b.energy, b.state, term::td(Construct::FieldAccess))};
  }

  ExprTerms node(const expr::Decl& d) {
    ExprTerms i = expr(*d.init);
    return {i.value, term::update(d.name, UpdateMode::Declare, i.value, i.state),
            after(i.energy, i.state, term::td(Construct::Decl))};
  }

  ExprTerms node(const expr::Assign& a) {
    ExprTerms v = expr(*a.value);
    return {v.value, term::update(a.name, UpdateMode::Assign, v.value, v.state),
            after(v.energy, v.state, term::td(Construct::Assign))};
  }

  std::vector<std::string> component_params(const expr::ComponentCall& c) const {
    std::vector<std::string> names;
    const ComponentFunction* fn = nullptr;
    if (models_)
      if (auto m = models_->find(c.component)) fn = m->function(c.function);
    for (std::size_t i = 0; i < c.args.size(); ++i)
      names.push_back(fn && i < fn->params.size() ? fn->params[i].first : "x" + std::to_string(i + 1));
    return names;
  }

  ExprTerms node(const expr::ComponentCall& c) {
    components_used_.insert(c.component);
    Args a = args(c.args);
    auto params = component_params(c);
    auto sc = term::scope(params, a.state, a.values);
    auto v_f = term::component(TermKind::CmpValue, c.component, c.function, params);
    auto s_f = term::component(TermKind::CmpEffect, c.component, c.function, params);
    auto e_f = term::component(TermKind::CmpEnergy, c.component, c.function, params);
    auto charge = term::plus(term::td_component(c.component, c.function), e_f);
    // Guards may read the arguments, so with parameters the energy runs
    // under the scope; without them it is exactly E_ex ⊕ (Σ_ex ≫ (td ⊕ E_f)).
    TermPtr energy = term::plus(a.energy, term::compose(params.empty() ? a.state : sc, charge));
    return {term::compose(sc, v_f), term::split(a.state, term::compose(sc, s_f)), energy};
  }

  ExprTerms node(const expr::Call& c) {
    Args a = args(c.args);
    std::vector<std::string> params;
    if (auto f = program_->function(c.function))
      for (auto& p : f->params) params.push_back(p.name);
    auto sc = term::scope(params, a.state, a.values);
    auto callee = [&](Sort s) -> TermPtr {
      if (auto it = installed_.find(c.function); it != installed_.end()) return it->second.subst(s);
      return term::rec(s, c.function);
    };
    return {term::compose(sc, callee(Sort::Value)), term::split(a.state, term::compose(sc, callee(Sort::State))),
            term::plus(a.energy, term::compose(sc, term::plus(term::td(Construct::Call), callee(Sort::Energy))))};
  }

  ExprTerms node(const expr::Comma& c) {
    StmtTerms s = stmt(*c.first);
    if (auto k = c.result->as<expr::Const>(); k && k->implicit) return {term::const_v(k->value), s.state, s.energy};
    ExprTerms r = expr(*c.result);
    return {term::compose(s.state, r.value), term::compose(s.state, r.state),
            term::plus(term::td(Construct::Seq), after(s.energy, s.state, r.energy))};
  }

  StmtTerms node(const stmt::Skip&) { return {term::id(), term::td(Construct::Skip)}; }

  StmtTerms node(const stmt::Seq& s) {
    StmtTerms a = stmt(*s.first);
    StmtTerms b = stmt(*s.second);
    return {term::compose(a.state, b.state), term::plus(term::td(Construct::Seq), after(a.energy, a.state, b.energy))};
  }

  StmtTerms node(const stmt::ExprStmt& s) {
    ExprTerms e = expr(s.expr);
    return {e.state, e.energy};
  }

  StmtTerms node(const stmt::If& s) {
    ExprTerms c = expr(s.cond);
    StmtTerms t = stmt(*s.then_branch);
    TermPtr else_state = c.state;
    TermPtr else_energy = term::zero();
    if (s.else_branch) {
      StmtTerms e = stmt(**s.else_branch);
      else_state = term::compose(c.state, term::block(e.state));
      else_energy = term::compose(c.state, term::block(e.energy));
    }
    return {term::cond(c.value, term::compose(c.state, term::block(t.state)), else_state),
            term::plus(after(c.energy, c.state, term::td(Construct::If)),
                       term::cond(c.value, term::compose(c.state, term::block(t.energy)), else_energy))};
  }

  StmtTerms node(const stmt::While& s) {
    ExprTerms c = expr(s.cond);
    StmtTerms b = stmt(*s.body);
    auto body_s = term::block(b.state);
    auto body_e = term::block(b.energy);
    return {term::loop(Sort::State, LoopMode::While, c.value, c.state, c.energy, body_s, body_e),
            term::plus(term::td(Construct::While),
                       term::loop(Sort::Energy, LoopMode::While, c.value, c.state, c.energy, body_s, body_e))};
  }

  StmtTerms node(const stmt::Repeat& s) {
    ExprTerms n = expr(s.count);
    StmtTerms b = stmt(*s.body);
    auto body_s = term::block(b.state);
    auto body_e = term::block(b.energy);
    return {term::loop(Sort::State, LoopMode::Repeat, n.value, n.state, n.energy, body_s, body_e),
            term::plus(after(n.energy, n.state, term::td(Construct::Repeat)),
                       term::loop(Sort::Energy, LoopMode::Repeat, n.value, n.state, n.energy, body_s, body_e))};
  }

  const TypedProgram* program_;
  const ModelSet* models_;
  std::map<std::string, FunctionTerms> installed_;
  std::set<std::string> components_used_;
};

}  // namespace detail

/// Transforms one expression. Calls to functions resolve to Rec placeholders.
inline ExprTerms transform_expr(const TypedProgram& program, const Expr& e, const ModelSet* models = nullptr) {
  return detail::Transformer(program, models).expr(e);
}

inline StmtTerms transform_stmt(const TypedProgram& program, const Stmt& s, const ModelSet* models = nullptr) {
  return detail::Transformer(program, models).stmt(s);
}

/// Transforms a whole program. Models only supply component parameter names;
/// models and timings are otherwise bound when the Analysis is evaluated.
inline Analysis transform_program(const TypedProgram& program, const ModelSet* models = nullptr) {
  Analysis a;
  detail::Transformer tr(program, models);
  tr.install_functions(a);

  auto fresh_scope = term::scope({}, term::id(), {});
  for (auto& g : program.program.globals) {
    ExprTerms init = tr.expr(g.init);
    GlobalTerms gt;
    gt.name = g.name;
    gt.state = term::compose(fresh_scope, term::update(g.name, UpdateMode::DefineGlobal, init.value, init.state));
    gt.energy = term::compose(fresh_scope, term::plus(init.energy, term::compose(init.state, term::td(Construct::Decl))));
    a.globals.push_back(gt);
    a.default_globals[g.name] =
        default_value(g.type, [&](const std::string& s) -> const StructLayout& { return resolve_struct(program, s); });
  }
  TermPtr init_chain = a.globals.empty() ? term::id() : a.globals.back().state;
  a.init_energy = a.globals.empty() ? term::zero() : a.globals.back().energy;
  for (std::size_t i = a.globals.size(); i-- > 1;) {
    init_chain = term::compose(a.globals[i - 1].state, init_chain);
    a.init_energy = term::plus(a.globals[i - 1].energy, term::compose(a.globals[i - 1].state, a.init_energy));
  }
  a.init_state = term::split(term::id(), init_chain);

  if (auto main = program.function("main")) {
    a.has_main = true;
    a.main_params = main->params;
    std::vector<std::string> names;
    std::vector<TermPtr> values;
    for (auto& p : main->params) {
      names.push_back(p.name);
      values.push_back(term::lookup(p.name));
    }
    auto sc = term::scope(names, term::id(), values);
    const FunctionTerms& m = a.functions.at("main");
    a.program_value = term::compose(a.init_state, term::compose(sc, m.subst_value));
    a.program_state = term::compose(a.init_state, term::compose(sc, m.subst_state));
    a.program_energy = term::plus(
        a.init_energy,
        term::compose(a.init_state, term::compose(sc, term::plus(term::td(Construct::Call), m.subst_energy))));
  }
  return a;
}

}  // namespace eca
