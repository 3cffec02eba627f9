#pragma once

#include "eca/syntax/ast.hpp"

#include <sstream>
#include <string>

namespace eca {

namespace detail {

// Binding strength, loosest first. A child printed below the level its
// position requires gets parentheses.
enum Level : int {
  kComma = 0,
  kSeq = 1,
  kAssign = 2,
  kOr = 3,
  kAnd = 4,
  kCompare = 5,
  kAdd = 6,
  kMul = 7,
  kPostfix = 8,
  kPrimary = 9,
};

inline int binary_level(BinaryOp op) {
  if (op == BinaryOp::Or) return kOr;
  if (op == BinaryOp::And) return kAnd;
  if (is_comparison(op)) return kCompare;
  if (op == BinaryOp::Mul) return kMul;
  return kAdd;
}

class Printer {
 public:
  std::string program(const Program& p) {
    for (auto& s : p.structs) {
      out_ << "struct " << s.name << " begin\n";
      for (auto& f : s.fields) out_ << "  " << f.type.str() << " " << f.name << ";\n";
      out_ << "end\n\n";
    }
    for (auto& g : p.globals) out_ << g.type.str() << " " << g.name << " = " << expr(g.init, kAssign) << "\n";
    if (!p.globals.empty()) out_ << "\n";
    for (std::size_t i = 0; i < p.functions.size(); ++i) {
      auto& f = p.functions[i];
      if (i) out_ << "\n";
      out_ << f.return_type.str() << " " << f.name << "(";
      for (std::size_t k = 0; k < f.params.size(); ++k) {
        if (k) out_ << ", ";
        out_ << f.params[k].type.str() << " " << f.params[k].name;
      }
      out_ << ") begin\n";
      indent_ = 1;
      out_ << pad() << expr(f.body, kComma) << "\n";
      indent_ = 0;
      out_ << "end\n";
    }
    std::string text = out_.str();
    while (text.size() > 1 && text.ends_with("\n\n")) text.pop_back();
    return text;
  }

  std::string expr(const Expr& e, int need) {
    int lvl = level(e);
    std::string s = expr_text(e);
    return lvl < need ? "(" + s + ")" : s;
  }

  std::string stmt(const Stmt& s, int need) {
    int lvl = level(s);
    std::string t = stmt_text(s);
    return lvl < need ? "(" + t + ")" : t;
  }

 private:
  std::string pad() const { return std::string(static_cast<std::size_t>(indent_) * 2, ' '); }

  static int level(const Expr& e) {
    if (auto c = e.as<expr::Comma>()) {
      if (auto k = c->result->as<expr::Const>(); k && k->implicit) return level(*c->first);
      return kComma;
    }
    if (auto b = e.as<expr::BinOp>()) return binary_level(b->op);
    if (e.is<expr::Assign>() || e.is<expr::Decl>()) return kAssign;
    if (e.is<expr::FieldAccess>()) return kPostfix;
    return kPrimary;
  }

  static int level(const Stmt& s) {
    if (s.as<stmt::Seq>()) return kSeq;
    if (auto e = s.as<stmt::ExprStmt>()) return level(e->expr);
    return kPrimary;
  }

  std::string args(const std::vector<Expr>& a) {
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i) s += ", ";
      s += expr(a[i], kAssign);
    }
    return s + ")";
  }

  std::string expr_text(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, expr::Const>) return n.value.str();
          else if constexpr (std::is_same_v<T, expr::Var>) return n.name;
          else if constexpr (std::is_same_v<T, expr::BinOp>) {
            int lvl = binary_level(n.op);
            // Left-associative: the right operand needs one level tighter.
            // Comparisons do not chain, so both sides need to be tighter.
            int lhs_need = is_comparison(n.op) ? lvl + 1 : lvl;
            return expr(*n.lhs, lhs_need) + " " + binary_op_text(n.op) + " " + expr(*n.rhs, lvl + 1);
          } else if constexpr (std::is_same_v<T, expr::Construct>) return n.struct_name + args(n.args);
          else if constexpr (std::is_same_v<T, expr::FieldAccess>) return expr(*n.base, kPostfix) + "." + n.field;
          else if constexpr (std::is_same_v<T, expr::Decl>) return n.type.str() + " " + n.name + " = " + expr(*n.init, kAssign);
          else if constexpr (std::is_same_v<T, expr::Assign>) return n.name + " = " + expr(*n.value, kAssign);
          else if constexpr (std::is_same_v<T, expr::ComponentCall>) return n.component + "::" + n.function + args(n.args);
          else if constexpr (std::is_same_v<T, expr::Call>) return n.function + args(n.args);
          else {
            if (auto k = n.result->template as<expr::Const>(); k && k->implicit) return stmt_text(*n.first);
            return stmt(*n.first, kSeq) + ",\n" + pad() + expr(*n.result, kComma);
          }
        },
        e.node);
  }

  std::string block(const Stmt& s) {
    ++indent_;
    std::string body = "\n" + pad() + stmt(s, kComma) + "\n";
    --indent_;
    return body + pad();
  }

  std::string stmt_text(const Stmt& s) {
    return std::visit(
        [&](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, stmt::Skip>) return "skip";
          else if constexpr (std::is_same_v<T, stmt::Seq>) return stmt(*n.first, kAssign) + ";\n" + pad() + stmt(*n.second, kSeq);
          else if constexpr (std::is_same_v<T, stmt::ExprStmt>) return expr_text(n.expr);
          else if constexpr (std::is_same_v<T, stmt::If>) {
            std::string s = "if " + expr(n.cond, kComma) + " then" + block(*n.then_branch);
            if (n.else_branch) s += "else" + block(**n.else_branch);
            return s + "end";
          } else if constexpr (std::is_same_v<T, stmt::Repeat>)
            return "repeat " + expr(n.count, kComma) + " begin" + block(*n.body) + "end";
          else return "while " + expr(n.cond, kComma) + " begin" + block(*n.body) + "end";
        },
        s.node);
  }

  std::ostringstream out_;
  int indent_ = 0;
};

}  // namespace detail

/// Renders a program as ECA source that parses back to an equal Program.
inline std::string pretty_print(const Program& p) { return detail::Printer().program(p); }

inline std::string pretty_print(const Expr& e) { return detail::Printer().expr(e, detail::kComma); }

inline std::string pretty_print(const Stmt& s) { return detail::Printer().stmt(s, detail::kComma); }

}  // namespace eca
