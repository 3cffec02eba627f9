#pragma once

#include "eca/transform/transform.hpp"

#include <string>

namespace eca {

namespace detail {

inline const char* sort_letter(Sort s) {
  switch (s) {
    case Sort::Value: return "V";
    case Sort::State: return "Σ";
    case Sort::Energy: return "E";
  }
  return "?";
}

inline bool infix(const Term& t) { return t.kind == TermKind::Compose || t.kind == TermKind::Plus; }

inline std::string symbolic(const Term& t);

inline std::string operand(const Term& t) {
  std::string s = symbolic(t);
  return infix(t) ? "(" + s + ")" : s;
}

inline std::string list(const std::vector<TermPtr>& kids, std::size_t from = 0) {
  std::string s;
  for (std::size_t i = from; i < kids.size(); ++i) s += (i > from ? ", " : "") + symbolic(*kids[i]);
  return s;
}

inline std::string names(const std::vector<std::string>& ns) {
  std::string s;
  for (std::size_t i = 0; i < ns.size(); ++i) s += (i ? "," : "") + ns[i];
  return s;
}

inline std::string symbolic(const Term& t) {
  switch (t.kind) {
    case TermKind::ConstV: return t.value.str();
    case TermKind::Lookup: return "lookup(" + t.name + ")";
    case TermKind::Id: return "id";
    case TermKind::ZeroE: return "0";
    case TermKind::Update: {
      const char* op = t.mode == UpdateMode::Assign ? "update" : t.mode == UpdateMode::Declare ? "declare" : "define";
      return std::string(op) + "(" + t.name + ", " + symbolic(*t.kids[0]) + ", " + symbolic(*t.kids[1]) + ")";
    }
    case TermKind::Compose: return operand(*t.kids[0]) + " >> " + operand(*t.kids[1]);
    case TermKind::Plus: return operand(*t.kids[0]) + " (+) " + operand(*t.kids[1]);
    case TermKind::Scope:
      return "scope[" + names(t.names) + "](" + symbolic(*t.kids[0]) + ", [" + list(t.kids, 1) + "])";
    case TermKind::Split: return "split(" + symbolic(*t.kids[0]) + ", " + symbolic(*t.kids[1]) + ")";
    case TermKind::TdEc:
      return t.component_time ? "td_ec(t_f)" : "td_ec(" + std::string(timing_key(t.construct)) + ")";
    case TermKind::CmpEffect: return "Σ[" + t.name + "::" + t.function + "]";
    case TermKind::CmpEnergy: return "E[" + t.name + "::" + t.function + "]";
    case TermKind::CmpValue: return "V[" + t.name + "::" + t.function + "]";
    case TermKind::Rec: return std::string("rec_") + sort_letter(t.sort) + "(" + t.name + ")";
    case TermKind::Subst: {
      std::string s = sort_letter(t.sort);
      return "subst(" + s + "_" + t.name + ", rec_" + s + "(" + t.name + "))";
    }
    case TermKind::BinOpNode:
      return std::string("binop(") + binary_op_text(t.op) + ", " + list(t.kids) + ")";
    case TermKind::FieldV: return "field(" + symbolic(*t.kids[0]) + ", " + t.name + ")";
    case TermKind::ConstructV: return "construct[" + t.name + "](" + list(t.kids) + ")";
    case TermKind::Cond: return std::string("cond_") + sort_letter(t.sort) + "(" + list(t.kids) + ")";
    case TermKind::Loop:
      return std::string(t.loop == LoopMode::While ? "while_" : "repeat_") + sort_letter(t.sort) + "(" + list(t.kids) +
             ")";
    case TermKind::Block: return "block(" + symbolic(*t.kids[0]) + ")";
  }
  return "?";
}

}  // namespace detail

/// Deterministic text form: ≫ as `>>`, ⊕ as `(+)`. Function bodies under
/// subst are referenced by name; print_analysis lists them.
inline std::string print_symbolic(const Term& t) { return detail::symbolic(t); }
inline std::string print_symbolic(const TermPtr& t) { return detail::symbolic(*t); }

/// Function table followed by the global initializers and the program terms.
inline std::string print_analysis(const Analysis& a) {
  std::string out;
  for (auto& name : a.function_order) {
    const FunctionTerms& f = a.functions.at(name);
    out += "function " + name + "(" + detail::names(f.params) + ")\n";
    out += "  V_" + name + " = " + print_symbolic(f.value) + "\n";
    out += "  Σ_" + name + " = " + print_symbolic(f.state) + "\n";
    out += "  E_" + name + " = " + print_symbolic(f.energy) + "\n";
  }
  for (auto& g : a.globals) {
    out += "global " + g.name + "\n";
    out += "  Σ = " + print_symbolic(g.state) + "\n";
    out += "  E = " + print_symbolic(g.energy) + "\n";
  }
  if (a.has_main) {
    out += "program\n";
    out += "  V = " + print_symbolic(a.program_value) + "\n";
    out += "  Σ = " + print_symbolic(a.program_state) + "\n";
    out += "  E = " + print_symbolic(a.program_energy) + "\n";
  }
  return out;
}

}  // namespace eca
