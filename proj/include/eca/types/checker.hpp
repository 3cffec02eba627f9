#pragma once

#include "eca/syntax/ast.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace eca {

struct FunctionSignature {
  std::vector<Type> params;
  Type result;
};

/// What the checker needs to know about a hardware component: its function
/// names with primitive parameter and result types.
struct ComponentSignature {
  std::string name;
  std::map<std::string, FunctionSignature> functions;
};

struct TypeError {
  Span span;
  std::string message;
  std::optional<Type> expected;
  std::optional<Type> found;
};

using StructLayout = std::vector<std::pair<std::string, Type>>;

/// A Program whose expressions carry their types, plus the resolved tables.
struct TypedProgram {
  Program program;
  std::map<std::string, StructLayout> structs;
  std::map<std::string, FunctionSignature> functions;
  std::map<std::string, Type> globals;
  std::map<std::string, ComponentSignature> components;

  const FunDef* function(const std::string& name) const { return program.function(name); }
};

struct CheckResult {
  TypedProgram typed;
  std::vector<TypeError> errors;

  bool ok() const { return errors.empty(); }
};

/// Declared field order of a struct. Throws std::out_of_range for unknown names.
inline const StructLayout& resolve_struct(const TypedProgram& typed, const std::string& name) {
  auto it = typed.structs.find(name);
  if (it == typed.structs.end()) throw std::out_of_range("unknown struct '" + name + "'");
  return it->second;
}

namespace detail {

class Checker {
 public:
  Checker(const Program& program, const std::vector<ComponentSignature>& components) {
    typed_.program = program;
    for (auto& c : components) typed_.components[c.name] = c;
  }

  CheckResult run() {
    collect_structs();
    collect_functions();
    collect_globals();

    Program& p = typed_.program;
    for (auto& g : p.globals) {
      scopes_.assign(1, {});
      Type t = check(g.init);
      if (known(t) && known(g.type) && t != g.type) mismatch(g.init.span, "global initializer", g.type, t);
      visible_globals_[g.name] = g.type;
    }
    visible_globals_ = typed_.globals;
    for (auto& f : p.functions) {
      scopes_.assign(1, {});
      for (auto& prm : f.params) scopes_[0][prm.name] = prm.type;
      Type body = check(f.body);
      if (known(body) && f.return_type.kind != Type::Kind::Void && body != f.return_type)
        mismatch(f.body.span, "body of '" + f.name + "'", f.return_type, body);
    }
    return CheckResult{std::move(typed_), std::move(errors_)};
  }

 private:
  static bool known(const Type& t) { return t.is_known(); }

  void error(Span span, std::string message, std::optional<Type> expected = {}, std::optional<Type> found = {}) {
    errors_.push_back(TypeError{span, std::move(message), std::move(expected), std::move(found)});
  }

  void mismatch(Span span, const std::string& what, const Type& expected, const Type& found) {
    error(span, what + ": expected " + expected.str() + ", found " + found.str(), expected, found);
  }

  bool type_exists(const Type& t) const { return !t.is_struct() || typed_.structs.count(t.struct_name); }

  // A variable, field, or parameter type must exist and hold a value.
  bool valid_storage(const Type& t, Span span, const std::string& what) {
    if (t.kind == Type::Kind::Void) {
      error(span, what + " cannot have type void");
      return false;
    }
    if (!type_exists(t)) {
      error(span, what + " has unknown type '" + t.str() + "'");
      return false;
    }
    return true;
  }

  void collect_structs() {
    for (auto& s : typed_.program.structs) {
      if (typed_.structs.count(s.name)) {
        error(s.span, "duplicate struct '" + s.name + "'");
        continue;
      }
      typed_.structs[s.name] = {};
    }
    for (auto& s : typed_.program.structs) {
      auto& layout = typed_.structs[s.name];
      if (!layout.empty()) continue;  // duplicate definition, already reported
      std::set<std::string> seen;
      for (auto& f : s.fields) {
        if (!seen.insert(f.name).second) error(f.span, "duplicate field '" + f.name + "' in struct '" + s.name + "'");
        valid_storage(f.type, f.span, "field '" + f.name + "'");
        layout.emplace_back(f.name, f.type);
      }
    }
    // A struct may not contain itself by value, directly or through others.
    std::map<std::string, int> state;
    std::function<bool(const std::string&)> cyclic = [&](const std::string& name) {
      int& st = state[name];
      if (st == 1) return true;
      if (st == 2) return false;
      st = 1;
      for (auto& [fname, ft] : typed_.structs[name])
        if (ft.is_struct() && typed_.structs.count(ft.struct_name) && cyclic(ft.struct_name)) return true;
      st = 2;
      return false;
    };
    for (auto& s : typed_.program.structs) {
      state.clear();
      if (cyclic(s.name)) error(s.span, "struct '" + s.name + "' contains itself by value");
    }
  }

  void collect_functions() {
    for (auto& f : typed_.program.functions) {
      if (typed_.functions.count(f.name)) {
        error(f.span, "duplicate function '" + f.name + "'");
        continue;
      }
      if (typed_.structs.count(f.name)) error(f.span, "function '" + f.name + "' has the same name as a struct");
      if (!type_exists(f.return_type)) error(f.span, "unknown return type '" + f.return_type.str() + "'");
      FunctionSignature sig{{}, f.return_type};
      std::set<std::string> seen;
      for (auto& prm : f.params) {
        if (!seen.insert(prm.name).second) error(prm.span, "duplicate parameter '" + prm.name + "'");
        valid_storage(prm.type, prm.span, "parameter '" + prm.name + "'");
        sig.params.push_back(prm.type);
      }
      typed_.functions[f.name] = std::move(sig);
    }
  }

  void collect_globals() {
    for (auto& g : typed_.program.globals) {
      if (typed_.globals.count(g.name)) {
        error(g.span, "duplicate global '" + g.name + "'");
        continue;
      }
      valid_storage(g.type, g.span, "global '" + g.name + "'");
      typed_.globals[g.name] = g.type;
    }
  }

  std::optional<Type> lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto f = it->find(name); f != it->end()) return f->second;
    if (auto g = visible_globals_.find(name); g != visible_globals_.end()) return g->second;
    return std::nullopt;
  }

  void check_args(std::vector<Expr>& args, const std::vector<Type>& params, Span span, const std::string& callee,
                  bool component) {
    std::vector<Type> found;
    for (auto& a : args) found.push_back(check(a));
    if (args.size() != params.size()) {
      error(span, "'" + callee + "' expects " + std::to_string(params.size()) + " argument(s), got " +
                      std::to_string(args.size()));
      return;
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!known(found[i])) continue;
      if (component && found[i].is_struct()) {
        error(args[i].span, "struct value of type '" + found[i].str() + "' cannot be passed to component function '" +
                                callee + "'",
              params[i], found[i]);
        continue;
      }
      if (found[i] != params[i]) mismatch(args[i].span, "argument " + std::to_string(i + 1) + " of '" + callee + "'", params[i], found[i]);
    }
  }

  Type binary(expr::BinOp& b, Span span) {
    Type l = check(*b.lhs);
    Type r = check(*b.rhs);
    if (!known(l) || !known(r)) return is_comparison(b.op) || is_logical(b.op) ? Type::bool_() : Type::unknown();
    std::string op = std::string("operator '") + binary_op_text(b.op) + "'";
    if (is_logical(b.op)) {
      if (l != Type::bool_()) mismatch(b.lhs->span, op, Type::bool_(), l);
      if (r != Type::bool_()) mismatch(b.rhs->span, op, Type::bool_(), r);
      return Type::bool_();
    }
    if (is_arithmetic(b.op)) {
      if (!l.is_numeric()) {
        mismatch(b.lhs->span, op, Type::int_(), l);
        return Type::unknown();
      }
      if (r != l) {
        mismatch(b.rhs->span, op, l, r);
        return Type::unknown();
      }
      return l;
    }
    bool equality = b.op == BinaryOp::Eq || b.op == BinaryOp::Ne;
    bool lhs_ok = equality ? l.is_primitive() : l.is_numeric();
    if (!lhs_ok) mismatch(b.lhs->span, op, Type::int_(), l);
    else if (r != l) mismatch(b.rhs->span, op, l, r);
    (void)span;
    return Type::bool_();
  }

  Type check(Expr& e) {
    e.type = std::visit([&](auto& n) { return check_node(n, e.span); }, e.node);
    return e.type;
  }

  Type check_node(expr::Const& c, Span) { return c.value.type(); }

  Type check_node(expr::Var& v, Span span) {
    if (auto t = lookup(v.name)) return *t;
    error(span, "unknown variable '" + v.name + "'");
    return Type::unknown();
  }

  Type check_node(expr::BinOp& b, Span span) { return binary(b, span); }

  Type check_node(expr::Construct& c, Span span) {
    auto it = typed_.structs.find(c.struct_name);
    if (it == typed_.structs.end()) {
      for (auto& a : c.args) check(a);
      error(span, "unknown struct '" + c.struct_name + "'");
      return Type::unknown();
    }
    std::vector<Type> fields;
    for (auto& [n, t] : it->second) fields.push_back(t);
    check_args(c.args, fields, span, c.struct_name, false);
    return Type::struct_(c.struct_name);
  }

  Type check_node(expr::FieldAccess& f, Span span) {
    Type base = check(*f.base);
    if (!known(base)) return Type::unknown();
    if (!base.is_struct()) {
      error(span, "field access '." + f.field + "' on non-struct type " + base.str(), std::nullopt, base);
      return Type::unknown();
    }
    for (auto& [n, t] : typed_.structs[base.struct_name])
      if (n == f.field) return t;
    error(span, "struct '" + base.str() + "' has no field '" + f.field + "'");
    return Type::unknown();
  }

  Type check_node(expr::Decl& d, Span span) {
    Type init = check(*d.init);
    bool valid = valid_storage(d.type, span, "variable '" + d.name + "'");
    if (valid && known(init) && init != d.type) mismatch(d.init->span, "initializer of '" + d.name + "'", d.type, init);
    auto& scope = scopes_.back();
    if (scope.count(d.name)) error(span, "'" + d.name + "' is already declared in this scope");
    scope[d.name] = d.type;
    return valid ? d.type : Type::unknown();
  }

  Type check_node(expr::Assign& a, Span span) {
    Type value = check(*a.value);
    auto target = lookup(a.name);
    if (!target) {
      error(span, "assignment to unknown variable '" + a.name + "'");
      return Type::unknown();
    }
    if (known(value) && value != *target) mismatch(a.value->span, "assignment to '" + a.name + "'", *target, value);
    return *target;
  }

  Type check_node(expr::ComponentCall& c, Span span) {
    std::string callee = c.component + "::" + c.function;
    auto comp = typed_.components.find(c.component);
    const FunctionSignature* sig = nullptr;
    if (comp == typed_.components.end()) {
      error(span, "unknown component '" + c.component + "'");
    } else if (auto f = comp->second.functions.find(c.function); f == comp->second.functions.end()) {
      error(span, "component '" + c.component + "' has no function '" + c.function + "'");
    } else {
      sig = &f->second;
    }
    if (!sig) {
      for (auto& a : c.args) check(a);
      return Type::unknown();
    }
    check_args(c.args, sig->params, span, callee, true);
    return sig->result;
  }

  Type check_node(expr::Call& c, Span span) {
    auto f = typed_.functions.find(c.function);
    if (f == typed_.functions.end()) {
      for (auto& a : c.args) check(a);
      error(span, "unknown function '" + c.function + "'");
      return Type::unknown();
    }
    check_args(c.args, f->second.params, span, c.function, false);
    return f->second.result;
  }

  Type check_node(expr::Comma& c, Span) {
    check(*c.first);
    return check(*c.result);
  }

  void condition(Expr& cond, const Type& want, const std::string& construct) {
    Type t = check(cond);
    if (known(t) && t != want) mismatch(cond.span, construct + " condition", want, t);
  }

  void child_scope(Stmt& s) {
    scopes_.emplace_back();
    check(s);
    scopes_.pop_back();
  }

  void check(Stmt& s) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, stmt::Seq>) {
            check(*n.first);
            check(*n.second);
          } else if constexpr (std::is_same_v<T, stmt::ExprStmt>) {
            check(n.expr);
          } else if constexpr (std::is_same_v<T, stmt::If>) {
            condition(n.cond, Type::bool_(), "if");
            child_scope(*n.then_branch);
            if (n.else_branch) child_scope(**n.else_branch);
          } else if constexpr (std::is_same_v<T, stmt::Repeat>) {
            Type t = check(n.count);
            if (known(t) && t != Type::int_()) mismatch(n.count.span, "repeat count", Type::int_(), t);
            child_scope(*n.body);
          } else if constexpr (std::is_same_v<T, stmt::While>) {
            condition(n.cond, Type::bool_(), "while");
            child_scope(*n.body);
          }
        },
        s.node);
  }

  TypedProgram typed_;
  std::vector<TypeError> errors_;
  std::vector<std::map<std::string, Type>> scopes_;
  std::map<std::string, Type> visible_globals_;
};

}  // namespace detail

/// Type checks `program` against the given component signatures. Checking
/// continues after errors so every violation is reported.
inline CheckResult check(const Program& program, const std::vector<ComponentSignature>& components) {
  return detail::Checker(program, components).run();
}

}  // namespace eca
