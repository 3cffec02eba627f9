#include "eca/app/report.hpp"
#include "eca/app/selftest.hpp"
#include "eca/syntax/ast_json.hpp"
#include "eca/transform/print.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace eca;

namespace {

int load_error_exit(const LoadError& e) {
  switch (e.stage()) {
    case LoadError::Stage::Syntax:
    case LoadError::Stage::Types: return 1;
    default: return 2;
  }
}

void print_errors(const LoadError& e) {
  for (auto& m : e.messages()) std::cerr << m << "\n";
}

std::string fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) h = (h ^ c) * 0x100000001b3ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string digest_of(const std::string& path) {
  try {
    return fnv1a(read_file(path));
  } catch (const std::exception&) {
    return "";
  }
}

struct Options {
  std::string program;
  std::vector<std::string> models;
  std::string timing;
  std::vector<std::string> inputs;
  std::string engine = "both";
  bool json = false;
  bool emit_ast = false;
  bool emit_term = false;
  std::string trace;
  std::vector<std::string> files;
};

Engine engine_of(const std::string& s) {
  if (s == "interp") return Engine::Interp;
  if (s == "transform") return Engine::Transform;
  return Engine::Both;
}

int cmd_parse(const Options& o) {
  Program p;
  try {
    p = parse_file(o.program);
  } catch (const LoadError& e) {
    print_errors(e);
    return load_error_exit(e);
  }
  if (o.emit_ast) std::cout << ast_to_json(p).dump(2) << "\n";
  return 0;
}

int cmd_check(const Options& o) {
  ModelSet models;
  try {
    models = load_models(o.models);
    for (auto& path : o.models) {
      auto loaded = load_model(read_file(path));
      for (auto& w : loaded.warnings) std::cerr << path << ": warning: " << w << "\n";
    }
    load_program(o.program, models);
  } catch (const LoadError& e) {
    print_errors(e);
    return load_error_exit(e);
  }
  std::cout << o.program << ": ok\n";
  return 0;
}

void write_trace(const std::string& path, const std::vector<TraceEvent>& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace to '" + path + "'");
  for (auto& ev : trace) out << ev.to_json().dump() << "\n";
}

nlohmann::json analysis_json(const Analysis& a, const Scenario& s) {
  nlohmann::json fs = nlohmann::json::array();
  for (auto& name : a.function_order) {
    auto& f = a.functions.at(name);
    fs.push_back({{"name", name},
                  {"size", {{"V", term_size(*f.value)}, {"Σ", term_size(*f.state)}, {"E", term_size(*f.energy)}}}});
  }
  nlohmann::json models = nlohmann::json::object();
  for (auto& m : s.models) models[m] = digest_of(m);
  nlohmann::json j{{"functions", fs}, {"models", models}, {"text", print_analysis(a)}};
  j["timing"] = s.timing ? nlohmann::json{{*s.timing, digest_of(*s.timing)}} : nlohmann::json(nullptr);
  if (a.has_main) j["program_energy_size"] = term_size(*a.program_energy);
  return j;
}

int cmd_analyze(const Options& o, const RunOptions& run_options) {
  Scenario s;
  s.name = std::filesystem::path(o.program).stem().string();
  s.program = o.program;
  s.models = o.models;
  if (!o.timing.empty()) s.timing = o.timing;
  try {
    for (auto& b : o.inputs) s.inputs.push_back(parse_binding(b));
  } catch (const ScenarioError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  PreparedScenario p;
  try {
    p = prepare(s);
  } catch (const LoadError& e) {
    print_errors(e);
    return load_error_exit(e);
  }

  Engine engine = engine_of(o.engine);
  RunOptions options = run_options;
  options.record_trace = engine == Engine::Both || !o.trace.empty();
  Outcome outcome = run_scenario(p, engine, options);
  ReportRow row = make_row(s, engine);
  fill_row(row, outcome);

  std::optional<Analysis> analysis;
  if (o.emit_term) analysis = transform_program(p.program.typed, &p.models);

  if (o.json) {
    nlohmann::json j = row_json(row);
    if (analysis) j["analysis"] = analysis_json(*analysis, s);
    std::cout << j.dump(2) << "\n";
  } else {
    if (analysis) std::cout << print_analysis(*analysis);
    std::cout << row_text(row);
  }
  const EngineOutcome& primary = outcome.primary();
  if (!o.trace.empty() && primary.result) write_trace(o.trace, primary.result->trace);

  if (row.status == ReportRow::Status::Divergent) return 3;
  if (row.status == ReportRow::Status::Failed) return 4;
  return 0;
}

int cmd_compare(const Options& o, const RunOptions& run_options) {
  std::vector<Scenario> scenarios;
  for (auto& f : o.files) {
    try {
      std::filesystem::path path(f);
      if (path.extension() == ".eca") {
        auto more = load_scenarios(sidecar_path(path).string(), f);
        scenarios.insert(scenarios.end(), more.begin(), more.end());
      } else {
        auto more = load_scenarios(f);
        scenarios.insert(scenarios.end(), more.begin(), more.end());
      }
    } catch (const ScenarioError& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
  }
  if (scenarios.size() < 2) {
    std::cerr << "compare needs at least two scenarios\n";
    return 2;
  }
  Engine engine = engine_of(o.engine);
  RunOptions options = run_options;
  options.record_trace = engine == Engine::Both;
  std::vector<ReportRow> rows;
  for (auto& s : scenarios) {
    ReportRow row = make_row(s, engine);
    try {
      fill_row(row, run_scenario(prepare(s), engine, options));
    } catch (const LoadError& e) {
      row.status = ReportRow::Status::Failed;
      row.error = e.what();
    }
    if (row.status == ReportRow::Status::Divergent) row.status = ReportRow::Status::Failed;
    rows.push_back(std::move(row));
  }
  rank_rows(rows);
  if (o.json) std::cout << compare_json(rows).dump(2) << "\n";
  else std::cout << compare_text(rows);
  for (auto& r : rows)
    if (r.status != ReportRow::Status::Ok) return 4;
  return 0;
}

int cmd_selftest(const Options& o, const RunOptions& run_options) {
  std::filesystem::path dir(o.program);
  if (!std::filesystem::is_directory(dir) || corpus_programs(dir).empty()) {
    std::cerr << o.program << ": no .eca programs found\n";
    return 2;
  }
  SelftestReport report = selftest(dir, run_options);
  if (o.json) {
    nlohmann::json cases = nlohmann::json::array();
    for (auto& c : report.cases) {
      nlohmann::json j{{"program", c.program}, {"scenario", c.scenario}, {"pass", c.pass}, {"detail", c.detail}};
      if (c.trace_prefix) j["trace_prefix"] = *c.trace_prefix;
      cases.push_back(j);
    }
    std::cout << nlohmann::json{{"programs", report.programs}, {"cases", cases}}.dump(2) << "\n";
  } else {
    std::size_t passed = 0;
    for (auto& c : report.cases) {
      passed += c.pass;
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.program << " [" << c.scenario << "] " << c.detail << "\n";
    }
    std::cout << passed << "/" << report.cases.size() << " scenarios pass over " << report.programs
              << " programs\n";
  }
  if (auto f = report.first_failure()) {
    std::cerr << "first failure: " << f->program << " [" << f->scenario << "]";
    if (f->trace_prefix) std::cerr << ", traces agree for the first " << *f->trace_prefix << " events";
    std::cerr << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-consumption analysis for ECA programs"};
  app.require_subcommand(1);
  Options o;

  auto add_models = [&](CLI::App* c) { c->add_option("--model", o.models, "component model file")->take_all(); };

  auto* parse = app.add_subcommand("parse", "parse a program");
  parse->add_option("program", o.program)->required();
  parse->add_flag("--emit-ast", o.emit_ast, "print the syntax tree as JSON");

  auto* check = app.add_subcommand("check", "type-check a program against component models");
  check->add_option("program", o.program)->required();
  add_models(check);

  auto* analyze = app.add_subcommand("analyze", "run a program on the engines and report its energy");
  analyze->add_option("program", o.program)->required();
  add_models(analyze);
  analyze->add_option("--timing", o.timing, "timing table");
  analyze->add_option("--input", o.inputs, "name=value binding for main")->take_all();
  analyze->add_option("--engine", o.engine)->check(CLI::IsMember({"interp", "transform", "both"}));
  analyze->add_flag("--json", o.json);
  analyze->add_flag("--emit-term", o.emit_term, "print the symbolic terms");
  analyze->add_option("--trace", o.trace, "write the energy trace as JSON lines");

  auto* compare = app.add_subcommand("compare", "rank scenarios by energy");
  compare->add_option("scenarios", o.files, "scenario files or programs with sidecars")->required();
  compare->add_option("--engine", o.engine)->check(CLI::IsMember({"interp", "transform", "both"}));
  compare->add_flag("--json", o.json);

  auto* self = app.add_subcommand("selftest", "check both engines agree on a corpus");
  self->add_option("corpus", o.program)->required();
  self->add_flag("--json", o.json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunOptions run_options;
  try {
    run_options.recursion_limit = recursion_limit_from_env(std::getenv("ECA_RECURSION_LIMIT"));
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*parse) return cmd_parse(o);
    if (*check) return cmd_check(o);
    if (*analyze) return cmd_analyze(o, run_options);
    if (*compare) return cmd_compare(o, run_options);
    if (*self) return cmd_selftest(o, run_options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
