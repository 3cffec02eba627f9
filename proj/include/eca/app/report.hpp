#pragma once

#include "eca/app/session.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

namespace eca {

/// One analysed scenario, ready for rendering.
struct ReportRow {
  std::string scenario;
  std::string program;
  std::vector<std::string> models;
  std::optional<std::string> timing;
  std::vector<std::pair<std::string, std::string>> inputs;
  Engine engine = Engine::Both;
  enum class Status { Ok, Divergent, Failed } status = Status::Ok;
  std::optional<RunResult> result;
  std::string error;
  std::optional<Divergence> divergence;
  bool minimum = false;
};

inline const char* status_name(ReportRow::Status s) {
  switch (s) {
    case ReportRow::Status::Ok: return "ok";
    case ReportRow::Status::Divergent: return "DIVERGENT";
    case ReportRow::Status::Failed: return "FAILED";
  }
  return "?";
}

inline ReportRow make_row(const Scenario& s, Engine engine) {
  ReportRow r;
  r.scenario = s.name;
  r.program = s.program;
  r.models = s.models;
  r.timing = s.timing;
  r.inputs = s.inputs;
  r.engine = engine;
  return r;
}

inline void fill_row(ReportRow& row, const Outcome& o) {
  if (o.divergence) {
    row.status = ReportRow::Status::Divergent;
    row.divergence = o.divergence;
    row.error = o.divergence->what;
    return;
  }
  const EngineOutcome& e = o.primary();
  if (e.error) {
    row.status = ReportRow::Status::Failed;
    row.error = std::string(e.error->kind_name()) + ": " + e.error->what();
    return;
  }
  row.result = e.result;
}

/// Six significant decimals, exactness lives in the rational.
inline std::string decimal(const Energy& e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", e.approx());
  return buf;
}

inline nlohmann::json energy_json(const Energy& e) { return {{"exact", e.fraction()}, {"decimal", e.approx()}}; }

inline nlohmann::json row_json(const ReportRow& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["program"] = r.program;
  j["models"] = r.models;
  j["timing"] = r.timing ? nlohmann::json(*r.timing) : nlohmann::json(nullptr);
  nlohmann::json in = nlohmann::json::object();
  for (auto& [k, v] : r.inputs) in[k] = v;
  j["inputs"] = in;
  j["engine"] = engine_name(r.engine);
  j["status"] = status_name(r.status);
  j["minimum"] = r.minimum;
  if (r.result) {
    const RunResult& x = *r.result;
    j["energy"] = energy_json(x.energy);
    j["transition"] = energy_json(x.transition_energy);
    j["time_draw"] = energy_json(x.time_draw_energy);
    nlohmann::json per = nlohmann::json::object();
    for (auto& [c, e] : x.per_component) per[c] = energy_json(e);
    j["per_component"] = per;
    j["final_components"] = x.final_components;
    nlohmann::json g = nlohmann::json::object();
    for (auto& [k, v] : x.final_globals) g[k] = v.str();
    j["final_globals"] = g;
    j["value"] = x.value.str();
  }
  if (!r.error.empty()) j["error"] = r.error;
  if (r.divergence) j["divergence"] = {{"what", r.divergence->what}, {"trace_prefix", r.divergence->trace_prefix}};
  return j;
}

inline std::string row_text(const ReportRow& r) {
  std::string out = "scenario " + r.scenario + " [" + engine_name(r.engine) + "]: " + status_name(r.status) + "\n";
  if (r.result) {
    const RunResult& x = *r.result;
    out += "  total       " + x.energy.str() + " (" + decimal(x.energy) + " J)\n";
    out += "  transition  " + x.transition_energy.str() + "\n";
    out += "  time-draw   " + x.time_draw_energy.str() + "\n";
    for (auto& [c, e] : x.per_component) out += "  component   " + c + " " + e.str() + "\n";
    for (auto& [c, s] : x.final_components) out += "  final state " + c + " = " + s + "\n";
    out += "  value       " + x.value.str() + "\n";
  }
  if (!r.error.empty()) out += "  error       " + r.error + "\n";
  if (r.divergence) out += "  trace agrees for the first " + std::to_string(r.divergence->trace_prefix) + " events\n";
  return out;
}

/// Orders rows by energy ascending, keeps ties in scenario order, sends
/// failures last and marks the cheapest successful rows.
inline void rank_rows(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.result.has_value() != b.result.has_value()) return a.result.has_value();
    if (!a.result) return false;
    return a.result->energy < b.result->energy;
  });
  for (auto& r : rows) r.minimum = false;
  if (!rows.empty() && rows.front().result) rows.front().minimum = true;
}

inline std::string compare_text(const std::vector<ReportRow>& rows) {
  std::size_t width = 8;
  for (auto& r : rows) width = std::max(width, r.scenario.size());
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ReportRow& r = rows[i];
    std::string name = r.scenario + std::string(width - r.scenario.size(), ' ');
    std::string line = (r.minimum ? "* " : "  ") + std::to_string(i + 1) + ". " + name + "  ";
    if (r.result) line += r.result->energy.str() + " (" + decimal(r.result->energy) + " J)";
    else line += std::string(status_name(r.status)) + ": " + r.error;
    out += line + "\n";
  }
  return out;
}

inline nlohmann::json compare_json(const std::vector<ReportRow>& rows) {
  nlohmann::json a = nlohmann::json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nlohmann::json j = row_json(rows[i]);
    j["rank"] = i + 1;
    a.push_back(j);
  }
  return {{"rows", a}};
}

}  // namespace eca
