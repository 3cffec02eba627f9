#pragma once

#include "eca/syntax/ast.hpp"

#include <json.hpp>

namespace eca {

namespace detail {

inline nlohmann::json span_json(const Span& s) { return {{"line", s.line}, {"column", s.column}}; }

inline nlohmann::json to_json(const Expr& e);
inline nlohmann::json to_json(const Stmt& s);

inline nlohmann::json list_json(const std::vector<Expr>& xs) {
  nlohmann::json a = nlohmann::json::array();
  for (auto& x : xs) a.push_back(to_json(x));
  return a;
}

struct ExprJson {
  nlohmann::json operator()(const expr::Const& c) const {
    nlohmann::json j{{"kind", "const"}, {"value", c.value.str()}, {"type", c.value.type().str()}};
    if (c.implicit) j["implicit"] = true;
    return j;
  }
  nlohmann::json operator()(const expr::Var& v) const { return {{"kind", "var"}, {"name", v.name}}; }
  nlohmann::json operator()(const expr::BinOp& b) const {
    return {{"kind", "binop"}, {"op", binary_op_text(b.op)}, {"lhs", to_json(*b.lhs)}, {"rhs", to_json(*b.rhs)}};
  }
  nlohmann::json operator()(const expr::Construct& c) const {
    return {{"kind", "construct"}, {"struct", c.struct_name}, {"args", list_json(c.args)}};
  }
  nlohmann::json operator()(const expr::FieldAccess& f) const {
    return {{"kind", "field"}, {"base", to_json(*f.base)}, {"field", f.field}};
  }
  nlohmann::json operator()(const expr::Decl& d) const {
    return {{"kind", "decl"}, {"type", d.type.str()}, {"name", d.name}, {"init", to_json(*d.init)}};
  }
  nlohmann::json operator()(const expr::Assign& a) const {
    return {{"kind", "assign"}, {"name", a.name}, {"value", to_json(*a.value)}};
  }
  nlohmann::json operator()(const expr::ComponentCall& c) const {
    return {{"kind", "component_call"},
            {"component", c.component},
            {"function", c.function},
            {"args", list_json(c.args)}};
  }
  nlohmann::json operator()(const expr::Call& c) const {
    return {{"kind", "call"}, {"function", c.function}, {"args", list_json(c.args)}};
  }
  nlohmann::json operator()(const expr::Comma& c) const {
    return {{"kind", "comma"}, {"first", to_json(*c.first)}, {"result", to_json(*c.result)}};
  }
};

struct StmtJson {
  nlohmann::json operator()(const stmt::Skip&) const { return {{"kind", "skip"}}; }
  nlohmann::json operator()(const stmt::Seq& s) const {
    return {{"kind", "seq"}, {"first", to_json(*s.first)}, {"second", to_json(*s.second)}};
  }
  nlohmann::json operator()(const stmt::ExprStmt& s) const { return {{"kind", "expr"}, {"expr", to_json(s.expr)}}; }
  nlohmann::json operator()(const stmt::If& s) const {
    nlohmann::json j{{"kind", "if"}, {"cond", to_json(s.cond)}, {"then", to_json(*s.then_branch)}};
    if (s.else_branch) j["else"] = to_json(**s.else_branch);
    return j;
  }
  nlohmann::json operator()(const stmt::Repeat& s) const {
    return {{"kind", "repeat"}, {"count", to_json(s.count)}, {"body", to_json(*s.body)}};
  }
  nlohmann::json operator()(const stmt::While& s) const {
    return {{"kind", "while"}, {"cond", to_json(s.cond)}, {"body", to_json(*s.body)}};
  }
};

inline nlohmann::json to_json(const Expr& e) {
  nlohmann::json j = std::visit(ExprJson{}, e.node);
  j["at"] = span_json(e.span);
  return j;
}

inline nlohmann::json to_json(const Stmt& s) {
  nlohmann::json j = std::visit(StmtJson{}, s.node);
  j["at"] = span_json(s.span);
  return j;
}

}  // namespace detail

/// JSON dump of a parsed program, with source positions.
inline nlohmann::json ast_to_json(const Program& p) {
  nlohmann::json j;
  j["structs"] = nlohmann::json::array();
  for (auto& s : p.structs) {
    nlohmann::json fields = nlohmann::json::array();
    for (auto& f : s.fields) fields.push_back({{"name", f.name}, {"type", f.type.str()}});
    j["structs"].push_back({{"name", s.name}, {"fields", fields}, {"at", detail::span_json(s.span)}});
  }
  j["globals"] = nlohmann::json::array();
  for (auto& g : p.globals)
    j["globals"].push_back(
        {{"name", g.name}, {"type", g.type.str()}, {"init", detail::to_json(g.init)}, {"at", detail::span_json(g.span)}});
  j["functions"] = nlohmann::json::array();
  for (auto& f : p.functions) {
    nlohmann::json params = nlohmann::json::array();
    for (auto& prm : f.params) params.push_back({{"name", prm.name}, {"type", prm.type.str()}});
    j["functions"].push_back({{"name", f.name},
                              {"returns", f.return_type.str()},
                              {"params", params},
                              {"body", detail::to_json(f.body)},
                              {"at", detail::span_json(f.span)}});
  }
  return j;
}

}  // namespace eca
