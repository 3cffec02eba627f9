#pragma once

#include "eca/app/selftest.hpp"
#include "eca/interp/interpreter.hpp"
#include "eca/support/big_stack.hpp"
#include "eca/syntax/parser.hpp"
#include "eca/syntax/printer.hpp"
#include "eca/transform/evaluate.hpp"
#include "eca/transform/print.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace eca::test {

inline std::string source_dir() { return ECA_SOURCE_DIR; }
inline std::string model_path(const std::string& name) { return source_dir() + "/models/" + name; }
inline std::string corpus_dir() { return source_dir() + "/corpus"; }

inline ComponentModel fig1() { return load_model_file(model_path("fig1.toml")); }

inline ModelSet models_of(std::vector<ComponentModel> ms) { return ModelSet(std::move(ms)); }

inline TypedProgram typed(const std::string& src, const ModelSet& models = {}) {
  CheckResult c = check(parse_source(src), models.signatures());
  if (!c.ok()) {
    std::string all;
    for (auto& e : c.errors) all += e.message + "\n";
    throw std::runtime_error("type errors:\n" + all);
  }
  return c.typed;
}

inline TimingTable timing_with(std::initializer_list<std::pair<Construct, Rational>> entries) {
  TimingTable t;
  for (auto& [c, d] : entries) t.set(c, Duration(d));
  return t;
}

inline RunResult interp(const TypedProgram& p, const ModelSet& m, const TimingTable& t, const Inputs& in = {},
                        RunOptions o = {}) {
  return run_with_stack(kEngineStackBytes, [&] { return run(p, m, t, in, o); });
}

inline RunResult transform(const TypedProgram& p, const ModelSet& m, const TimingTable& t, const Inputs& in = {},
                           RunOptions o = {}) {
  return run_with_stack(kEngineStackBytes, [&] {
    Analysis a = transform_program(p, &m);
    return evaluate(a, m, t, in, o);
  });
}

/// Every well-typed corpus program with its sidecar scenarios.
struct CorpusEntry {
  std::filesystem::path program;
  std::vector<Scenario> scenarios;
};

inline std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  for (auto& p : corpus_programs(corpus_dir()))
    out.push_back({p, load_scenarios(sidecar_path(p).string(), p.string())});
  return out;
}

inline std::vector<std::filesystem::path> ill_typed_corpus() { return corpus_programs(corpus_dir() + "/ill_typed"); }

}  // namespace eca::test
