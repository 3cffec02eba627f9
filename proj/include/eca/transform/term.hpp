#pragma once

#include "eca/interp/timing.hpp"
#include "eca/support/value.hpp"
#include "eca/syntax/ast.hpp"

#include <memory>
#include <string>
#include <vector>

// Combinator terms produced by the transformation. A term denotes a value
// function (V), a state update (Σ) or an energy function (E) over
// (PState × GState); the sort is fixed when the node is built.

namespace eca {

enum class Sort { Value, State, Energy };

enum class TermKind {
  ConstV,      // value
  Lookup,      // name: local then global
  Id,          // identity state update
  Update,      // name, mode; kids: V, Σ
  Compose,     // kids: first (Σ), second (any sort)
  Plus,        // kids: two energies on the same input
  ZeroE,
  Scope,       // params; kids: Σ_ex, then one V per param
  Split,       // kids: Σ for locals, Σ for globals
  TdEc,        // construct, or component::function for t_f
  CmpEffect,   // component, function, param names
  CmpEnergy,   // component, function, param names
  CmpValue,    // component, function, param names
  Rec,         // sort, function
  Subst,       // sort, function; kids: body
  BinOpNode,   // op; kids: lhs V, rhs V
  FieldV,      // name; kids: V
  ConstructV,  // name, field names; kids: V per field
  Cond,        // kids: cond V, then, else (State or Energy sort)
  Loop,        // loop mode; kids: cond V, cond Σ, cond E, body Σ, body E
  Block,       // kids: inner (State or Energy); runs in a pushed scope
};

enum class UpdateMode { Assign, Declare, DefineGlobal };
enum class LoopMode { While, Repeat };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind = TermKind::Id;
  Sort sort = Sort::State;
  std::string name;      // variable, field, struct, component, or function
  std::string function;  // component function
  std::vector<std::string> names;  // Scope params, ConstructV fields
  Value value;
  BinaryOp op = BinaryOp::Add;
  UpdateMode mode = UpdateMode::Assign;
  LoopMode loop = LoopMode::While;
  Construct construct = Construct::Var;
  bool component_time = false;  // TdEc charging a component function's t_f
  std::vector<TermPtr> kids;
  // The subtree reaches a Subst, Rec or Loop, so evaluating it may be costly.
  bool heavy = false;
};

/// Node constructors. Each fixes the sort and computes `heavy`.
namespace term {

inline Term node(TermKind kind, Sort sort) {
  Term t;
  t.kind = kind;
  t.sort = sort;
  return t;
}

inline TermPtr make(Term t) {
  for (auto& k : t.kids) t.heavy = t.heavy || k->heavy;
  if (t.kind == TermKind::Subst || t.kind == TermKind::Rec || t.kind == TermKind::Loop) t.heavy = true;
  return std::make_shared<const Term>(std::move(t));
}

inline TermPtr const_v(Value v) {
  Term t = node(TermKind::ConstV, Sort::Value);
  t.value = std::move(v);
  return make(std::move(t));
}

inline TermPtr lookup(std::string x) {
  Term t = node(TermKind::Lookup, Sort::Value);
  t.name = std::move(x);
  return make(std::move(t));
}

inline TermPtr id() {
  static const TermPtr shared = make(node(TermKind::Id, Sort::State));
  return shared;
}

inline TermPtr zero() {
  static const TermPtr shared = make(node(TermKind::ZeroE, Sort::Energy));
  return shared;
}

inline TermPtr update(std::string x, UpdateMode mode, TermPtr v, TermPtr sigma) {
  Term t = node(TermKind::Update, Sort::State);
  t.name = std::move(x);
  t.mode = mode;
  t.kids = {std::move(v), std::move(sigma)};
  return make(std::move(t));
}

/// a ≫ b: run the state update a, then b on the resulting state.
inline TermPtr compose(TermPtr a, TermPtr b) {
  Term t = node(TermKind::Compose, b->sort);
  t.kids = {std::move(a), std::move(b)};
  return make(std::move(t));
}

/// a ⊕ b: both energies on the same input, summed.
inline TermPtr plus(TermPtr a, TermPtr b) {
  Term t = node(TermKind::Plus, Sort::Energy);
  t.kids = {std::move(a), std::move(b)};
  return make(std::move(t));
}

inline TermPtr scope(std::vector<std::string> params, TermPtr sigma, std::vector<TermPtr> values) {
  Term t = node(TermKind::Scope, Sort::State);
  t.names = std::move(params);
  t.kids.push_back(std::move(sigma));
  for (auto& v : values) t.kids.push_back(std::move(v));
  return make(std::move(t));
}

inline TermPtr split(TermPtr locals, TermPtr globals) {
  Term t = node(TermKind::Split, Sort::State);
  t.kids = {std::move(locals), std::move(globals)};
  return make(std::move(t));
}

inline TermPtr td(Construct c) {
  Term t = node(TermKind::TdEc, Sort::Energy);
  t.construct = c;
  return make(std::move(t));
}

inline TermPtr td_component(std::string component, std::string function) {
  Term t = node(TermKind::TdEc, Sort::Energy);
  t.component_time = true;
  t.name = std::move(component);
  t.function = std::move(function);
  return make(std::move(t));
}

/// E[C::f], Σ[C::f] or V[C::f]; `params` name the scope bindings holding the arguments.
inline TermPtr component(TermKind kind, std::string c, std::string f, std::vector<std::string> params) {
  Sort s = kind == TermKind::CmpEffect ? Sort::State : kind == TermKind::CmpEnergy ? Sort::Energy : Sort::Value;
  Term t = node(kind, s);
  t.name = std::move(c);
  t.function = std::move(f);
  t.names = std::move(params);
  return make(std::move(t));
}

inline TermPtr rec(Sort s, std::string f) {
  Term t = node(TermKind::Rec, s);
  t.name = std::move(f);
  return make(std::move(t));
}

inline TermPtr subst(std::string f, TermPtr body) {
  Term t = node(TermKind::Subst, body->sort);
  t.name = std::move(f);
  t.kids = {std::move(body)};
  return make(std::move(t));
}

inline TermPtr binop(BinaryOp op, TermPtr a, TermPtr b) {
  Term t = node(TermKind::BinOpNode, Sort::Value);
  t.op = op;
  t.kids = {std::move(a), std::move(b)};
  return make(std::move(t));
}

inline TermPtr field(TermPtr base, std::string name) {
  Term t = node(TermKind::FieldV, Sort::Value);
  t.name = std::move(name);
  t.kids = {std::move(base)};
  return make(std::move(t));
}

inline TermPtr construct(std::string name, std::vector<std::string> fields, std::vector<TermPtr> values) {
  Term t = node(TermKind::ConstructV, Sort::Value);
  t.name = std::move(name);
  t.names = std::move(fields);
  t.kids = std::move(values);
  return make(std::move(t));
}

inline TermPtr cond(TermPtr c, TermPtr then_branch, TermPtr else_branch) {
  Term t = node(TermKind::Cond, then_branch->sort);
  t.kids = {std::move(c), std::move(then_branch), std::move(else_branch)};
  return make(std::move(t));
}

inline TermPtr loop(Sort s, LoopMode mode, TermPtr cv, TermPtr cs, TermPtr ce, TermPtr body_s, TermPtr body_e) {
  Term t = node(TermKind::Loop, s);
  t.loop = mode;
  t.kids = {std::move(cv), std::move(cs), std::move(ce), std::move(body_s), std::move(body_e)};
  return make(std::move(t));
}

inline TermPtr block(TermPtr inner) {
  Term t = node(TermKind::Block, inner->sort);
  t.kids = {std::move(inner)};
  return make(std::move(t));
}

}  // namespace term

/// Structural equality: same node kinds, labels and children.
inline bool same_shape(const Term& a, const Term& b) {
  if (a.kind != b.kind || a.sort != b.sort || a.name != b.name || a.function != b.function || a.names != b.names ||
      !(a.value == b.value) || a.op != b.op || a.mode != b.mode || a.loop != b.loop || a.construct != b.construct ||
      a.component_time != b.component_time || a.kids.size() != b.kids.size())
    return false;
  // Subst bodies are the installed function terms; the name identifies them.
  if (a.kind == TermKind::Subst) return true;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!same_shape(*a.kids[i], *b.kids[i])) return false;
  return true;
}

/// Node count, not descending into Subst bodies.
inline std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  if (t.kind != TermKind::Subst)
    for (auto& k : t.kids) n += term_size(*k);
  return n;
}

}  // namespace eca
