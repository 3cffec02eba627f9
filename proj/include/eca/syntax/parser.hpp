#pragma once

#include "eca/syntax/ast.hpp"
#include "eca/syntax/lexer.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Two-phase parser. Phase one is a predictive recursive descent over a
// unified statement/expression tree (RawNode) that never looks more than two
// tokens ahead. Phase two classifies every RawNode as a Stmt or an Expr and
// resolves `Name(args)` into a constructor when Name is a declared struct.

namespace eca {

class ParseError : public SourceError {
 public:
  ParseError(Span span, const std::string& message, std::vector<std::string> expected = {})
      : SourceError(span, message), expected_(std::move(expected)) {}
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::vector<std::string> expected_;
};

/// Raised by phase two when a statement-only form is used as a value.
class ClassificationError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Token stream with a hard lookahead bound. Every inspection goes through
/// peek(k), so the deepest k ever requested is recorded.
class TokenCursor {
 public:
  static constexpr std::size_t kMaxLookahead = 2;

  explicit TokenCursor(const std::vector<Token>& tokens) : tokens_(tokens) {
    if (tokens_.empty() || tokens_.back().kind != Token::Kind::End)
      throw std::invalid_argument("token list must end with an End token");
  }

  const Token& peek(std::size_t k = 0) {
    if (k >= kMaxLookahead) throw std::logic_error("parser exceeded its lookahead bound");
    max_lookahead_ = std::max(max_lookahead_, k + 1);
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }

  Token next() {
    const Token& t = tokens_[std::min(pos_, tokens_.size() - 1)];
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }

  std::size_t max_lookahead() const { return max_lookahead_; }

 private:
  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;
  std::size_t max_lookahead_ = 0;
};

struct ParseStats {
  std::size_t max_lookahead = 0;
};

/// Phase-one node. Statement and expression forms share one shape.
struct RawNode {
  enum class Kind { Const, Var, BinOp, Call, Field, Decl, Assign, ComponentCall, Comma, Skip, Seq, If, Repeat, While };

  Kind kind = Kind::Skip;
  Span span;
  Value value;
  std::string name;   // variable, function, struct field, component
  std::string name2;  // component function
  BinaryOp op = BinaryOp::Add;
  Type type;
  std::vector<RawNode> kids;
  bool has_else = false;

  bool is_statement_form() const {
    return kind == Kind::Skip || kind == Kind::Seq || kind == Kind::If || kind == Kind::Repeat || kind == Kind::While;
  }
};

namespace detail {

inline const char* raw_form_name(RawNode::Kind k) {
  switch (k) {
    case RawNode::Kind::Skip: return "skip";
    case RawNode::Kind::Seq: return "statement sequence";
    case RawNode::Kind::If: return "if";
    case RawNode::Kind::Repeat: return "repeat";
    case RawNode::Kind::While: return "while";
    default: return "expression";
  }
}

inline std::string describe(const Token& t) {
  if (t.kind == Token::Kind::End) return "end of input";
  return "'" + t.text + "'";
}

class RawParser {
 public:
  explicit RawParser(const std::vector<Token>& tokens) : cur_(tokens) {}

  struct RawStruct {
    StructDef def;
  };
  struct RawFun {
    Type ret;
    std::string name;
    std::vector<Param> params;
    RawNode body;
    Span span;
  };
  struct RawGlobal {
    Type type;
    std::string name;
    RawNode init;
    Span span;
  };
  struct RawProgram {
    std::vector<StructDef> structs;
    std::vector<RawFun> functions;
    std::vector<RawGlobal> globals;
  };

  RawProgram program() {
    RawProgram p;
    while (cur_.peek().kind != Token::Kind::End) {
      if (cur_.peek().is_keyword("struct")) {
        p.structs.push_back(struct_def());
        continue;
      }
      Span start = cur_.peek().span;
      Type t = type();
      Token name = expect_ident("a function or global name");
      if (cur_.peek().is_punct("(")) {
        RawFun f;
        f.ret = t;
        f.name = name.text;
        cur_.next();
        if (!cur_.peek().is_punct(")")) {
          for (;;) {
            Param prm;
            prm.span = cur_.peek().span;
            prm.type = type();
            prm.name = expect_ident("a parameter name").text;
            f.params.push_back(std::move(prm));
            if (!cur_.peek().is_punct(",")) break;
            cur_.next();
          }
        }
        expect_punct(")");
        expect_keyword("begin");
        f.body = unit();
        Token end = expect_keyword("end");
        f.span = Span::cover(start, end.span);
        p.functions.push_back(std::move(f));
      } else if (cur_.peek().is_op("=")) {
        cur_.next();
        RawGlobal g;
        g.type = t;
        g.name = name.text;
        g.init = assignment();
        g.span = Span::cover(start, g.init.span);
        p.globals.push_back(std::move(g));
      } else {
        fail({"'('", "'='"});
      }
    }
    return p;
  }

  RawNode whole_expression() {
    RawNode n = unit();
    if (cur_.peek().kind != Token::Kind::End) fail({"end of input"});
    return n;
  }

  std::size_t max_lookahead() const { return cur_.max_lookahead(); }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) {
    const Token& t = cur_.peek();
    std::string msg = "unexpected " + describe(t) + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    throw ParseError(t.span, msg, std::move(expected));
  }

  Token expect_punct(std::string_view p) {
    if (!cur_.peek().is_punct(p)) fail({"'" + std::string(p) + "'"});
    return cur_.next();
  }
  Token expect_keyword(std::string_view k) {
    if (!cur_.peek().is_keyword(k)) fail({"'" + std::string(k) + "'"});
    return cur_.next();
  }
  Token expect_op(std::string_view o) {
    if (!cur_.peek().is_op(o)) fail({"'" + std::string(o) + "'"});
    return cur_.next();
  }
  Token expect_ident(const std::string& what) {
    if (cur_.peek().kind != Token::Kind::Identifier) fail({what});
    return cur_.next();
  }

  static bool is_type_keyword(const Token& t) {
    return t.kind == Token::Kind::Keyword &&
           (t.text == "void" || t.text == "bool" || t.text == "int" || t.text == "float");
  }

  Type type() {
    const Token& t = cur_.peek();
    if (is_type_keyword(t)) return primitive_type(cur_.next().text);
    if (t.kind == Token::Kind::Identifier) return Type::struct_(cur_.next().text);
    fail({"a type"});
  }

  StructDef struct_def() {
    StructDef s;
    Token kw = cur_.next();
    s.name = expect_ident("a struct name").text;
    expect_keyword("begin");
    while (!cur_.peek().is_keyword("end")) {
      Field f;
      f.span = cur_.peek().span;
      f.type = type();
      f.name = expect_ident("a field name").text;
      expect_punct(";");
      s.fields.push_back(std::move(f));
    }
    Token end = cur_.next();
    s.span = Span::cover(kw.span, end.span);
    return s;
  }

  static RawNode node(RawNode::Kind k, Span s) {
    RawNode n;
    n.kind = k;
    n.span = s;
    return n;
  }

  // unit := seq [',' unit]
  RawNode unit() {
    RawNode lhs = sequence();
    if (!cur_.peek().is_punct(",")) return lhs;
    cur_.next();
    RawNode rhs = unit();
    RawNode n = node(RawNode::Kind::Comma, Span::cover(lhs.span, rhs.span));
    n.kids.push_back(std::move(lhs));
    n.kids.push_back(std::move(rhs));
    return n;
  }

  // seq := assignment [';' seq]
  RawNode sequence() {
    RawNode first = assignment();
    if (!cur_.peek().is_punct(";")) return first;
    cur_.next();
    RawNode rest = sequence();
    RawNode n = node(RawNode::Kind::Seq, Span::cover(first.span, rest.span));
    n.kids.push_back(std::move(first));
    n.kids.push_back(std::move(rest));
    return n;
  }

  RawNode assignment() {
    const Token& t0 = cur_.peek(0);
    bool decl = is_type_keyword(t0);
    if (!decl && t0.kind == Token::Kind::Identifier) {
      const Token& t1 = cur_.peek(1);
      if (t1.kind == Token::Kind::Identifier) {
        decl = true;
      } else if (t1.is_op("=")) {
        Token name = cur_.next();
        cur_.next();
        RawNode value = assignment();
        RawNode n = node(RawNode::Kind::Assign, Span::cover(name.span, value.span));
        n.name = name.text;
        n.kids.push_back(std::move(value));
        return n;
      }
    }
    if (decl) {
      Span start = cur_.peek().span;
      Type ty = type();
      Token name = expect_ident("a variable name");
      expect_op("=");
      RawNode init = assignment();
      RawNode n = node(RawNode::Kind::Decl, Span::cover(start, init.span));
      n.type = ty;
      n.name = name.text;
      n.kids.push_back(std::move(init));
      return n;
    }
    return disjunction();
  }

  RawNode binary(BinaryOp op, RawNode lhs, RawNode rhs) {
    RawNode n = node(RawNode::Kind::BinOp, Span::cover(lhs.span, rhs.span));
    n.op = op;
    n.kids.push_back(std::move(lhs));
    n.kids.push_back(std::move(rhs));
    return n;
  }

  RawNode disjunction() {
    RawNode lhs = conjunction();
    while (cur_.peek().is_keyword("or")) {
      cur_.next();
      lhs = binary(BinaryOp::Or, std::move(lhs), conjunction());
    }
    return lhs;
  }

  RawNode conjunction() {
    RawNode lhs = comparison();
    while (cur_.peek().is_keyword("and")) {
      cur_.next();
      lhs = binary(BinaryOp::And, std::move(lhs), comparison());
    }
    return lhs;
  }

  static bool comparison_op(const Token& t, BinaryOp& op) {
    if (t.kind != Token::Kind::Operator) return false;
    if (t.text == ">") op = BinaryOp::Gt;
    else if (t.text == ">=") op = BinaryOp::Ge;
    else if (t.text == "==") op = BinaryOp::Eq;
    else if (t.text == "!=") op = BinaryOp::Ne;
    else if (t.text == "<=") op = BinaryOp::Le;
    else if (t.text == "<") op = BinaryOp::Lt;
    else return false;
    return true;
  }

  RawNode comparison() {
    RawNode lhs = additive();
    BinaryOp op;
    if (!comparison_op(cur_.peek(), op)) return lhs;
    cur_.next();
    RawNode result = binary(op, std::move(lhs), additive());
    if (comparison_op(cur_.peek(), op))
      throw ParseError(cur_.peek().span, "comparison operators do not chain; add parentheses");
    return result;
  }

  RawNode additive() {
    RawNode lhs = multiplicative();
    for (;;) {
      const Token& t = cur_.peek();
      if (t.is_op("+")) {
        cur_.next();
        lhs = binary(BinaryOp::Add, std::move(lhs), multiplicative());
      } else if (t.is_op("-")) {
        cur_.next();
        lhs = binary(BinaryOp::Sub, std::move(lhs), multiplicative());
      } else {
        return lhs;
      }
    }
  }

  RawNode multiplicative() {
    RawNode lhs = postfix();
    while (cur_.peek().is_op("*")) {
      cur_.next();
      lhs = binary(BinaryOp::Mul, std::move(lhs), postfix());
    }
    return lhs;
  }

  RawNode postfix() {
    RawNode base = primary();
    while (cur_.peek().is_op(".")) {
      cur_.next();
      Token field = expect_ident("a field name");
      RawNode n = node(RawNode::Kind::Field, Span::cover(base.span, field.span));
      n.name = field.text;
      n.kids.push_back(std::move(base));
      base = std::move(n);
    }
    return base;
  }

  std::vector<RawNode> arguments() {
    std::vector<RawNode> args;
    expect_punct("(");
    if (!cur_.peek().is_punct(")")) {
      for (;;) {
        args.push_back(assignment());
        if (!cur_.peek().is_punct(",")) break;
        cur_.next();
      }
    }
    return args;
  }

  RawNode primary() {
    const Token& t = cur_.peek();
    switch (t.kind) {
      case Token::Kind::IntLiteral: {
        Token lit = cur_.next();
        RawNode n = node(RawNode::Kind::Const, lit.span);
        n.value = Value(BigInt(lit.text));
        return n;
      }
      case Token::Kind::FloatLiteral: {
        Token lit = cur_.next();
        RawNode n = node(RawNode::Kind::Const, lit.span);
        n.value = *parse_literal(lit.text, Type::float_());
        return n;
      }
      case Token::Kind::BoolLiteral: {
        Token lit = cur_.next();
        RawNode n = node(RawNode::Kind::Const, lit.span);
        n.value = Value(lit.text == "true");
        return n;
      }
      case Token::Kind::Identifier: {
        const Token& t1 = cur_.peek(1);
        if (t1.is_op("::")) {
          Token comp = cur_.next();
          cur_.next();
          Token fun = expect_ident("a component function name");
          RawNode n = node(RawNode::Kind::ComponentCall, comp.span);
          n.name = comp.text;
          n.name2 = fun.text;
          n.kids = arguments();
          n.span = Span::cover(comp.span, expect_punct(")").span);
          return n;
        }
        if (t1.is_punct("(")) {
          Token fn = cur_.next();
          RawNode n = node(RawNode::Kind::Call, fn.span);
          n.name = fn.text;
          n.kids = arguments();
          n.span = Span::cover(fn.span, expect_punct(")").span);
          return n;
        }
        Token id = cur_.next();
        RawNode n = node(RawNode::Kind::Var, id.span);
        n.name = id.text;
        return n;
      }
      case Token::Kind::Punctuation:
        if (t.is_punct("(")) {
          Token open = cur_.next();
          RawNode inner = unit();
          Token close = expect_punct(")");
          inner.span = Span::cover(open.span, close.span);
          return inner;
        }
        break;
      case Token::Kind::Keyword:
        if (t.text == "skip") return node(RawNode::Kind::Skip, cur_.next().span);
        if (t.text == "if") {
          Token kw = cur_.next();
          RawNode n = node(RawNode::Kind::If, kw.span);
          n.kids.push_back(unit());
          expect_keyword("then");
          n.kids.push_back(unit());
          if (cur_.peek().is_keyword("else")) {
            cur_.next();
            n.has_else = true;
            n.kids.push_back(unit());
          }
          n.span = Span::cover(kw.span, expect_keyword("end").span);
          return n;
        }
        if (t.text == "repeat" || t.text == "while") {
          Token kw = cur_.next();
          RawNode n = node(kw.text == "repeat" ? RawNode::Kind::Repeat : RawNode::Kind::While, kw.span);
          n.kids.push_back(unit());
          expect_keyword("begin");
          n.kids.push_back(unit());
          n.span = Span::cover(kw.span, expect_keyword("end").span);
          return n;
        }
        break;
      default: break;
    }
    fail({"an expression"});
  }

  TokenCursor cur_;
};

/// Phase two: turns RawNodes into Stmt/Expr, rejecting statement forms in
/// value positions (only the left arm of a comma takes a statement).
class Classifier {
 public:
  explicit Classifier(std::set<std::string> struct_names) : structs_(std::move(struct_names)) {}

  Expr expr(const RawNode& n) const {
    using K = RawNode::Kind;
    auto kid = [&](std::size_t i) { return expr(n.kids[i]); };
    auto args = [&] {
      std::vector<Expr> out;
      out.reserve(n.kids.size());
      for (auto& k : n.kids) out.push_back(expr(k));
      return out;
    };
    Expr::Node node;
    switch (n.kind) {
      case K::Const: node = expr::Const{n.value}; break;
      case K::Var: node = expr::Var{n.name}; break;
      case K::BinOp: node = expr::BinOp{n.op, kid(0), kid(1)}; break;
      case K::Call:
        if (structs_.count(n.name)) node = expr::Construct{n.name, args()};
        else node = expr::Call{n.name, args()};
        break;
      case K::Field: node = expr::FieldAccess{kid(0), n.name}; break;
      case K::Decl: node = expr::Decl{n.type, n.name, kid(0)}; break;
      case K::Assign: node = expr::Assign{n.name, kid(0)}; break;
      case K::ComponentCall: node = expr::ComponentCall{n.name, n.name2, args()}; break;
      case K::Comma: node = expr::Comma{stmt(n.kids[0]), kid(1)}; break;
      default:
        throw ClassificationError(n.span, std::string("statement '") + raw_form_name(n.kind) +
                                              "' cannot be used where a value is required");
    }
    return Expr{std::move(node), n.span, {}};
  }

  Stmt stmt(const RawNode& n) const {
    using K = RawNode::Kind;
    Stmt::Node node;
    switch (n.kind) {
      case K::Skip: node = stmt::Skip{}; break;
      case K::Seq: node = stmt::Seq{stmt(n.kids[0]), stmt(n.kids[1])}; break;
      case K::If: {
        stmt::If s{expr(n.kids[0]), stmt(n.kids[1]), std::nullopt};
        if (n.has_else) s.else_branch = Box<Stmt>(stmt(n.kids[2]));
        node = std::move(s);
        break;
      }
      case K::Repeat: node = stmt::Repeat{expr(n.kids[0]), stmt(n.kids[1])}; break;
      case K::While: node = stmt::While{expr(n.kids[0]), stmt(n.kids[1])}; break;
      default: node = stmt::ExprStmt{expr(n)}; break;
    }
    return Stmt{std::move(node), n.span};
  }

  /// Function bodies are expressions; a statement-only body gets an implicit
  /// unit result.
  Expr body(const RawNode& n) const {
    if (!n.is_statement_form()) return expr(n);
    Expr unit{expr::Const{Value::unit(), true}, Span{n.span.line, n.span.column, 0, n.span.offset}, {}};
    return Expr{expr::Comma{stmt(n), std::move(unit)}, n.span, {}};
  }

 private:
  std::set<std::string> structs_;
};

}  // namespace detail

/// Parses a whole program from a token list produced by tokenize().
inline Program parse(const std::vector<Token>& tokens, ParseStats* stats = nullptr) {
  detail::RawParser raw(tokens);
  auto rp = raw.program();
  if (stats) stats->max_lookahead = raw.max_lookahead();

  std::set<std::string> struct_names;
  for (auto& s : rp.structs) struct_names.insert(s.name);
  detail::Classifier cls(std::move(struct_names));

  Program p;
  p.structs = std::move(rp.structs);
  for (auto& f : rp.functions) p.functions.push_back(FunDef{f.ret, f.name, f.params, cls.body(f.body), f.span});
  for (auto& g : rp.globals) p.globals.push_back(GlobalDef{g.type, g.name, cls.expr(g.init), g.span});
  return p;
}

inline Program parse_source(std::string_view source, ParseStats* stats = nullptr) {
  return parse(tokenize(source), stats);
}

/// Parses a standalone expression (used for component guards). Constructor
/// syntax is not available here since no structs are in scope.
inline Expr parse_expression(std::string_view source) {
  auto tokens = tokenize(source);
  detail::RawParser raw(tokens);
  return detail::Classifier({}).expr(raw.whole_expression());
}

}  // namespace eca
