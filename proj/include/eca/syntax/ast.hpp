#pragma once

#include "eca/support/box.hpp"
#include "eca/support/source.hpp"
#include "eca/support/value.hpp"
#include "eca/syntax/type.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

// Syntax tree of ECA programs. Equality is structural: spans and type
// annotations are ignored, so a parsed tree compares equal to its re-parse
// after pretty printing and to its type-checked counterpart.

namespace eca {

enum class BinaryOp { Add, Sub, Mul, Gt, Ge, Eq, Ne, Le, Lt, And, Or };

inline const char* binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::And: return "and";
    case BinaryOp::Or: return "or";
  }
  return "?";
}

inline bool is_comparison(BinaryOp op) {
  return op == BinaryOp::Gt || op == BinaryOp::Ge || op == BinaryOp::Eq || op == BinaryOp::Ne ||
         op == BinaryOp::Le || op == BinaryOp::Lt;
}

inline bool is_arithmetic(BinaryOp op) { return op == BinaryOp::Add || op == BinaryOp::Sub || op == BinaryOp::Mul; }

inline bool is_logical(BinaryOp op) { return op == BinaryOp::And || op == BinaryOp::Or; }

struct Expr;
struct Stmt;

namespace expr {

struct Const {
  Value value;
  // Set on the unit result the parser appends to statement-only function bodies.
  bool implicit = false;
  friend bool operator==(const Const&, const Const&) = default;
};
struct Var {
  std::string name;
  friend bool operator==(const Var&, const Var&) = default;
};
struct BinOp {
  BinaryOp op;
  Box<Expr> lhs, rhs;
  friend bool operator==(const BinOp&, const BinOp&) = default;
};
struct Construct {
  std::string struct_name;
  std::vector<Expr> args;
  friend bool operator==(const Construct&, const Construct&);
};
struct FieldAccess {
  Box<Expr> base;
  std::string field;
  friend bool operator==(const FieldAccess&, const FieldAccess&) = default;
};
struct Decl {
  Type type;
  std::string name;
  Box<Expr> init;
  friend bool operator==(const Decl&, const Decl&) = default;
};
struct Assign {
  std::string name;
  Box<Expr> value;
  friend bool operator==(const Assign&, const Assign&) = default;
};
struct ComponentCall {
  std::string component, function;
  std::vector<Expr> args;
  friend bool operator==(const ComponentCall&, const ComponentCall&);
};
struct Call {
  std::string function;
  std::vector<Expr> args;
  friend bool operator==(const Call&, const Call&);
};
struct Comma {
  Box<Stmt> first;
  Box<Expr> result;
  friend bool operator==(const Comma&, const Comma&) = default;
};

}  // namespace expr

struct Expr {
  using Node = std::variant<expr::Const, expr::Var, expr::BinOp, expr::Construct, expr::FieldAccess, expr::Decl,
                            expr::Assign, expr::ComponentCall, expr::Call, expr::Comma>;
  Node node;
  Span span;
  Type type;  // filled in by the type checker

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(node);
  }

  friend bool operator==(const Expr& a, const Expr& b) { return a.node == b.node; }
};

namespace expr {
inline bool operator==(const Construct& a, const Construct& b) {
  return a.struct_name == b.struct_name && a.args == b.args;
}
inline bool operator==(const ComponentCall& a, const ComponentCall& b) {
  return a.component == b.component && a.function == b.function && a.args == b.args;
}
inline bool operator==(const Call& a, const Call& b) { return a.function == b.function && a.args == b.args; }
}  // namespace expr

namespace stmt {

struct Skip {
  friend bool operator==(const Skip&, const Skip&) = default;
};
struct Seq {
  Box<Stmt> first, second;
  friend bool operator==(const Seq&, const Seq&) = default;
};
struct ExprStmt {
  Expr expr;
  friend bool operator==(const ExprStmt&, const ExprStmt&) = default;
};
struct If {
  Expr cond;
  Box<Stmt> then_branch;
  std::optional<Box<Stmt>> else_branch;
  friend bool operator==(const If&, const If&) = default;
};
struct Repeat {
  Expr count;
  Box<Stmt> body;
  friend bool operator==(const Repeat&, const Repeat&) = default;
};
struct While {
  Expr cond;
  Box<Stmt> body;
  friend bool operator==(const While&, const While&) = default;
};

}  // namespace stmt

struct Stmt {
  using Node = std::variant<stmt::Skip, stmt::Seq, stmt::ExprStmt, stmt::If, stmt::Repeat, stmt::While>;
  Node node;
  Span span;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }

  friend bool operator==(const Stmt& a, const Stmt& b) { return a.node == b.node; }
};

struct Field {
  std::string name;
  Type type;
  Span span;
  friend bool operator==(const Field& a, const Field& b) { return a.name == b.name && a.type == b.type; }
};

struct StructDef {
  std::string name;
  std::vector<Field> fields;
  Span span;
  friend bool operator==(const StructDef& a, const StructDef& b) { return a.name == b.name && a.fields == b.fields; }
};

struct Param {
  std::string name;
  Type type;
  Span span;
  friend bool operator==(const Param& a, const Param& b) { return a.name == b.name && a.type == b.type; }
};

struct FunDef {
  Type return_type;
  std::string name;
  std::vector<Param> params;
  Expr body;
  Span span;
  friend bool operator==(const FunDef& a, const FunDef& b) {
    return a.return_type == b.return_type && a.name == b.name && a.params == b.params && a.body == b.body;
  }
};

struct GlobalDef {
  Type type;
  std::string name;
  Expr init;
  Span span;
  friend bool operator==(const GlobalDef& a, const GlobalDef& b) {
    return a.type == b.type && a.name == b.name && a.init == b.init;
  }
};

struct Program {
  std::vector<StructDef> structs;
  std::vector<FunDef> functions;
  std::vector<GlobalDef> globals;

  const FunDef* function(const std::string& name) const {
    for (auto& f : functions)
      if (f.name == name) return &f;
    return nullptr;
  }
  const StructDef* struct_def(const std::string& name) const {
    for (auto& s : structs)
      if (s.name == name) return &s;
    return nullptr;
  }

  friend bool operator==(const Program&, const Program&) = default;
};

// Construction helpers, mostly for tests and the parser.
namespace build {

inline Expr make(Expr::Node n, Span s = {}) { return Expr{std::move(n), s, {}}; }
inline Stmt make(Stmt::Node n, Span s = {}) { return Stmt{std::move(n), s}; }

inline Expr int_(long long v) { return make(expr::Const{Value(BigInt(v))}); }
inline Expr bool_(bool v) { return make(expr::Const{Value(v)}); }
inline Expr var(std::string n) { return make(expr::Var{std::move(n)}); }
inline Expr bin(BinaryOp op, Expr a, Expr b) { return make(expr::BinOp{op, std::move(a), std::move(b)}); }
inline Expr assign(std::string n, Expr v) { return make(expr::Assign{std::move(n), std::move(v)}); }
inline Expr cmp_call(std::string c, std::string f, std::vector<Expr> args = {}) {
  return make(expr::ComponentCall{std::move(c), std::move(f), std::move(args)});
}
inline Expr call(std::string f, std::vector<Expr> args = {}) { return make(expr::Call{std::move(f), std::move(args)}); }
inline Stmt skip() { return make(stmt::Skip{}); }
inline Stmt expr_stmt(Expr e) { return make(stmt::ExprStmt{std::move(e)}); }
inline Stmt seq(Stmt a, Stmt b) { return make(stmt::Seq{std::move(a), std::move(b)}); }
inline Expr comma(Stmt s, Expr e) { return make(expr::Comma{std::move(s), std::move(e)}); }

}  // namespace build

}  // namespace eca
