#pragma once

#include "eca/app/scenario.hpp"
#include "eca/interp/interpreter.hpp"
#include "eca/support/big_stack.hpp"
#include "eca/syntax/parser.hpp"
#include "eca/transform/evaluate.hpp"

#include <optional>
#include <string>
#include <vector>

// Loading a scenario and running it on one or both engines.

namespace eca {

enum class Engine { Interp, Transform, Both };

inline const char* engine_name(Engine e) {
  switch (e) {
    case Engine::Interp: return "interp";
    case Engine::Transform: return "transform";
    case Engine::Both: return "both";
  }
  return "?";
}

/// Why a scenario could not be set up.
class LoadError : public std::runtime_error {
 public:
  enum class Stage { Io, Syntax, Types, Model, Timing, Inputs };

  LoadError(Stage stage, std::vector<std::string> messages)
      : std::runtime_error(join(messages)), stage_(stage), messages_(std::move(messages)) {}

  Stage stage() const { return stage_; }
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  static std::string join(const std::vector<std::string>& ms) {
    std::string s;
    for (auto& m : ms) s += (s.empty() ? "" : "\n") + m;
    return s;
  }

  Stage stage_;
  std::vector<std::string> messages_;
};

struct LoadedProgram {
  std::string path;
  Program program;
  TypedProgram typed;
};

inline std::string read_source(const std::string& path) {
  try {
    return read_file(path);
  } catch (const std::runtime_error& e) {
    throw LoadError(LoadError::Stage::Io, {e.what()});
  }
}

inline Program parse_file(const std::string& path, ParseStats* stats = nullptr) {
  std::string src = read_source(path);
  try {
    return parse_source(src, stats);
  } catch (const SourceError& e) {
    throw LoadError(LoadError::Stage::Syntax, {e.diagnostic().format(path)});
  }
}

inline ModelSet load_models(const std::vector<std::string>& paths) {
  ModelSet set;
  std::vector<std::string> errors;
  for (auto& p : paths) {
    try {
      set.add(load_model_file(p));
    } catch (const ModelError& e) {
      errors.insert(errors.end(), e.errors().begin(), e.errors().end());
    } catch (const std::runtime_error& e) {
      errors.push_back(e.what());
    }
  }
  if (!errors.empty()) throw LoadError(LoadError::Stage::Model, errors);
  return set;
}

inline TimingTable load_timing_file(const std::optional<std::string>& path) {
  if (!path) return {};
  try {
    return load_timing(read_file(*path));
  } catch (const TimingError& e) {
    throw LoadError(LoadError::Stage::Timing, {*path + ": " + e.what()});
  } catch (const std::runtime_error& e) {
    throw LoadError(LoadError::Stage::Timing, {e.what()});
  }
}

inline LoadedProgram load_program(const std::string& path, const ModelSet& models) {
  LoadedProgram lp;
  lp.path = path;
  lp.program = parse_file(path);
  CheckResult c = check(lp.program, models.signatures());
  if (!c.ok()) {
    std::vector<std::string> ms;
    for (auto& e : c.errors) ms.push_back(Diagnostic{e.span, e.message}.format(path));
    throw LoadError(LoadError::Stage::Types, ms);
  }
  lp.typed = std::move(c.typed);
  return lp;
}

/// Everything one run needs, fully validated.
struct PreparedScenario {
  Scenario scenario;
  ModelSet models;
  TimingTable timing;
  LoadedProgram program;
  Inputs inputs;
};

inline PreparedScenario prepare(const Scenario& s) {
  PreparedScenario p;
  p.scenario = s;
  p.models = load_models(s.models);
  p.timing = load_timing_file(s.timing);
  p.program = load_program(s.program, p.models);
  const FunDef* main = p.program.program.function("main");
  if (!main) throw LoadError(LoadError::Stage::Types, {s.program + ": program has no function 'main'"});
  try {
    p.inputs = convert_inputs(main->params, s.inputs);
  } catch (const ScenarioError& e) {
    throw LoadError(LoadError::Stage::Inputs, {e.what()});
  }
  return p;
}

/// A run that either finished or stopped with an ECA-level error.
struct EngineOutcome {
  std::optional<RunResult> result;
  std::optional<RuntimeError> error;
};

struct Divergence {
  std::string what;
  std::size_t trace_prefix = 0;
};

struct Outcome {
  Engine engine = Engine::Both;
  std::optional<EngineOutcome> interp, transform;
  std::optional<Divergence> divergence;

  /// The engine result to report; both agree whenever divergence is empty.
  const EngineOutcome& primary() const { return interp ? *interp : *transform; }
};

inline std::size_t common_trace_prefix(const std::vector<TraceEvent>& a, const std::vector<TraceEvent>& b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return n;
}

/// First observable difference between two runs, if any.
inline std::optional<Divergence> compare_outcomes(const EngineOutcome& a, const EngineOutcome& b) {
  auto diverge = [&](std::string what) {
    Divergence d;
    d.what = std::move(what);
    if (a.result && b.result) d.trace_prefix = common_trace_prefix(a.result->trace, b.result->trace);
    return d;
  };
  if (a.error || b.error) {
    if (a.error && b.error) {
      if (a.error->kind() == b.error->kind() && std::string(a.error->what()) == b.error->what()) return std::nullopt;
      return diverge(std::string("errors differ: '") + a.error->what() + "' vs '" + b.error->what() + "'");
    }
    return diverge(std::string("only one engine failed: ") + (a.error ? a.error->what() : b.error->what()));
  }
  const RunResult& x = *a.result;
  const RunResult& y = *b.result;
  if (!(x.energy == y.energy)) return diverge("energy " + x.energy.str() + " vs " + y.energy.str());
  if (!(x.value == y.value)) return diverge("value " + x.value.str() + " vs " + y.value.str());
  if (x.final_globals != y.final_globals) return diverge("final globals differ");
  if (x.final_components != y.final_components) return diverge("final component states differ");
  if (x.final_locals != y.final_locals) return diverge("final locals differ");
  if (x.trace != y.trace) return diverge("traces differ");
  return std::nullopt;
}

inline EngineOutcome run_engine(Engine e, const PreparedScenario& p, const RunOptions& options,
                                const Analysis* analysis = nullptr) {
  EngineOutcome out;
  try {
    out.result = run_with_stack(kEngineStackBytes, [&] {
      if (e == Engine::Interp) return run(p.program.typed, p.models, p.timing, p.inputs, options);
      if (analysis) return evaluate(*analysis, p.models, p.timing, p.inputs, options);
      Analysis a = transform_program(p.program.typed, &p.models);
      return evaluate(a, p.models, p.timing, p.inputs, options);
    });
  } catch (const RuntimeError& err) {
    out.error = err;
  }
  return out;
}

/// Runs the selected engines and cross-checks them when both run.
inline Outcome run_scenario(const PreparedScenario& p, Engine engine, RunOptions options = {}) {
  Outcome o;
  o.engine = engine;
  if (engine != Engine::Transform) o.interp = run_engine(Engine::Interp, p, options);
  if (engine != Engine::Interp) o.transform = run_engine(Engine::Transform, p, options);
  if (o.interp && o.transform) o.divergence = compare_outcomes(*o.interp, *o.transform);
  return o;
}

/// ECA_RECURSION_LIMIT, or the default when unset.
inline std::size_t recursion_limit_from_env(const char* value) {
  if (!value || !*value) return kDefaultRecursionLimit;
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || value[pos] != '\0' || n == 0)
    throw std::invalid_argument(std::string("ECA_RECURSION_LIMIT must be a positive integer, got '") + value + "'");
  return static_cast<std::size_t>(n);
}

}  // namespace eca
