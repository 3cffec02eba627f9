#pragma once

#include "eca/app/session.hpp"

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

// Oracle self-check: every corpus program runs on both engines under each
// of its sidecar scenarios, and the two must agree exactly.

namespace eca {

struct SelftestCase {
  std::string program;
  std::string scenario;
  bool pass = false;
  std::string detail;
  std::optional<std::size_t> trace_prefix;
};

struct SelftestReport {
  std::size_t programs = 0;
  std::vector<SelftestCase> cases;

  bool all_pass() const {
    return std::all_of(cases.begin(), cases.end(), [](const SelftestCase& c) { return c.pass; });
  }
  const SelftestCase* first_failure() const {
    for (auto& c : cases)
      if (!c.pass) return &c;
    return nullptr;
  }
};

/// Sorted `.eca` files directly inside `dir`.
inline std::vector<std::filesystem::path> corpus_programs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  std::error_code ec;
  for (auto& entry : std::filesystem::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == ".eca") out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

/// Events until the running total first exceeds `expected`.
inline std::size_t prefix_within(const std::vector<TraceEvent>& trace, const Energy& expected) {
  Energy sum;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    sum += trace[i].energy;
    if (sum > expected) return i;
  }
  return trace.size();
}

inline SelftestCase check_scenario(const Scenario& s, const RunOptions& options) {
  SelftestCase c;
  c.program = std::filesystem::path(s.program).filename().string();
  c.scenario = s.name;
  PreparedScenario p;
  try {
    p = prepare(s);
  } catch (const LoadError& e) {
    c.detail = e.what();
    return c;
  }
  RunOptions traced = options;
  traced.record_trace = true;
  Outcome o = run_scenario(p, Engine::Both, traced);
  if (o.divergence) {
    c.detail = "engines diverge: " + o.divergence->what;
    c.trace_prefix = o.divergence->trace_prefix;
    return c;
  }
  const EngineOutcome& e = o.primary();
  if (e.error) {
    if (s.expect_error && *s.expect_error == e.error->kind_name()) {
      c.pass = true;
      c.detail = std::string("both engines: ") + e.error->what();
    } else {
      c.detail = std::string(e.error->kind_name()) + ": " + e.error->what();
    }
    return c;
  }
  if (s.expect_error) {
    c.detail = "expected " + *s.expect_error + ", but the run finished";
    return c;
  }
  if (s.expect_energy && !(*s.expect_energy == e.result->energy)) {
    c.detail = "expected " + s.expect_energy->str() + ", both engines give " + e.result->energy.str();
    c.trace_prefix = prefix_within(e.result->trace, *s.expect_energy);
    return c;
  }
  c.pass = true;
  c.detail = e.result->energy.str();
  return c;
}

inline SelftestReport selftest(const std::filesystem::path& dir, const RunOptions& options = {}) {
  SelftestReport report;
  for (auto& prog : corpus_programs(dir)) {
    ++report.programs;
    auto sidecar = sidecar_path(prog);
    std::vector<Scenario> scenarios;
    try {
      if (!std::filesystem::exists(sidecar)) throw ScenarioError("no scenario file " + sidecar.filename().string());
      scenarios = load_scenarios(sidecar.string(), prog.string());
    } catch (const ScenarioError& e) {
      SelftestCase c;
      c.program = prog.filename().string();
      c.scenario = "-";
      c.detail = e.what();
      report.cases.push_back(c);
      continue;
    }
    for (auto& s : scenarios) report.cases.push_back(check_scenario(s, options));
  }
  return report;
}

}  // namespace eca
