#pragma once

#include "eca/hw/kv.hpp"
#include "eca/hw/model.hpp"
#include "eca/interp/runtime.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Scenario files: a program, the models and timing it runs against, and the
// inputs for main. A sidecar `prog.scenarios.toml` lists them as
// [[scenario]] tables; relative paths resolve against the sidecar's folder.

namespace eca {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string name;
  std::string program;
  std::vector<std::string> models;
  std::optional<std::string> timing;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::optional<Energy> expect_energy;
  std::optional<std::string> expect_error;
};

inline std::filesystem::path sidecar_path(const std::filesystem::path& program) {
  std::filesystem::path p = program;
  return p.replace_extension(".scenarios.toml");
}

/// Splits a `name=value` binding.
inline std::pair<std::string, std::string> parse_binding(const std::string& text) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ScenarioError("input '" + text + "' is not of the form name=value");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

/// Converts textual bindings to values typed by main's parameters.
inline Inputs convert_inputs(const std::vector<Param>& params,
                             const std::vector<std::pair<std::string, std::string>>& bindings) {
  Inputs out;
  for (auto& [name, text] : bindings) {
    const Param* p = nullptr;
    for (auto& q : params)
      if (q.name == name) p = &q;
    if (!p) throw ScenarioError("main has no parameter '" + name + "'");
    if (out.count(name)) throw ScenarioError("input '" + name + "' given twice");
    auto v = parse_literal(text, p->type);
    if (!v) throw ScenarioError("input '" + name + "': '" + text + "' is not a " + p->type.str());
    out[name] = *v;
  }
  for (auto& p : params)
    if (!out.count(p.name)) throw ScenarioError("missing input '" + p.name + "'");
  return out;
}

namespace detail {

inline std::string resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative()) path = base / path;
  return path.lexically_normal().string();
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const std::string& where) {
  std::vector<std::string> out;
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) throw ScenarioError(where + ": expected a list of paths");
  for (auto& x : j) {
    if (!x.is_string()) throw ScenarioError(where + ": expected a list of paths");
    out.push_back(x.get<std::string>());
  }
  return out;
}

}  // namespace detail

/// Reads a scenario file. `default_program` applies to entries without a
/// `program` key.
inline std::vector<Scenario> load_scenarios(const std::string& path, std::optional<std::string> default_program = {}) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw ScenarioError(e.what());
  }
  nlohmann::json doc;
  try {
    doc = kv::parse(text);
  } catch (const kv::SyntaxError& e) {
    throw ScenarioError(path + ":" + e.what());
  }
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (auto& [k, v] : doc.items())
    if (k != "scenario") throw ScenarioError(path + ": unknown key '" + k + "'");
  if (!doc.contains("scenario") || !doc["scenario"].is_array())
    throw ScenarioError(path + ": no [[scenario]] entries");

  std::vector<Scenario> out;
  std::size_t index = 0;
  for (auto& t : doc["scenario"]) {
    ++index;
    std::string where = path + ": scenario " + std::to_string(index);
    Scenario s;
    for (auto& [k, v] : t.items()) {
      if (k == "name") {
        s.name = detail::scalar_text(v);
      } else if (k == "program") {
        s.program = detail::resolve(base, detail::scalar_text(v));
      } else if (k == "models") {
        for (auto& m : detail::string_list(v, where + ".models")) s.models.push_back(detail::resolve(base, m));
      } else if (k == "timing") {
        s.timing = detail::resolve(base, detail::scalar_text(v));
      } else if (k == "inputs") {
        if (!v.is_object()) throw ScenarioError(where + ".inputs: expected a table");
        for (auto& [name, value] : v.items()) s.inputs.emplace_back(name, detail::scalar_text(value));
      } else if (k == "expect_energy") {
        try {
          s.expect_energy = Energy(parse_rational(detail::quantity_text(v)));
        } catch (const std::invalid_argument& e) {
          throw ScenarioError(where + ".expect_energy: " + e.what());
        }
      } else if (k == "expect_error") {
        s.expect_error = detail::scalar_text(v);
      } else {
        throw ScenarioError(where + ": unknown key '" + k + "'");
      }
    }
    if (s.name.empty()) s.name = "#" + std::to_string(index);
    if (s.program.empty()) {
      if (!default_program) throw ScenarioError(where + ": missing 'program'");
      s.program = *default_program;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace eca
