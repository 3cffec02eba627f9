// One line per acceptance criterion. Exit status is nonzero when a
// criterion fails other than the documented AC1 extended-driver total.

#include "helpers.hpp"

#include <chrono>
#include <iostream>
#include <set>

using namespace eca;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

int unexpected_failures = 0;

void report(const char* id, const Verdict& v, const std::string& summary, bool expected_red = false) {
  std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << id << " " << summary;
  if (!v.pass) std::cout << ": " << v.detail;
  std::cout << "\n";
  if (!v.pass && !expected_red) ++unexpected_failures;
}

Verdict run_checked(const std::function<void(Verdict&)>& body) {
  Verdict v;
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  return v;
}

std::string both_energy(const TypedProgram& p, const ModelSet& m, const TimingTable& t, Verdict& v,
                        const Inputs& in = {}) {
  RunResult i = test::interp(p, m, t, in);
  RunResult x = test::transform(p, m, t, in);
  v.require(i.energy == x.energy, "engines disagree: " + i.energy.str() + " vs " + x.energy.str());
  return i.energy.fraction();
}

// Every total a walk from `start` can reach without exceeding `limit`.
std::set<Rational> walk_totals(const ComponentModel& m, const std::string& start, const Rational& limit) {
  std::set<std::pair<std::string, Rational>> seen{{start, Rational(0)}};
  std::vector<std::pair<std::string, Rational>> work{{start, Rational(0)}};
  std::set<Rational> totals;
  while (!work.empty()) {
    auto [state, e] = work.back();
    work.pop_back();
    totals.insert(e);
    for (auto& [name, f] : m.functions)
      for (auto& t : f.transitions) {
        if (t.from != state) continue;
        Rational next = e + t.energy.value();
        if (next > limit) continue;
        if (seen.insert({t.to, next}).second) work.push_back({t.to, next});
      }
  }
  return totals;
}

Verdict ac1() {
  return run_checked([](Verdict& v) {
    auto t0 = Clock::now();
    ModelSet m = test::models_of({test::fig1()});
    auto driver = test::typed(read_file(test::corpus_dir() + "/fig1_driver.eca"), m);
    v.require(both_energy(driver, m, TimingTable{}, v) == "16/1", "four-edge driver is not 16 J");
    v.require(seconds_since(t0) < 1.0, "four-edge driver took longer than 1 s");
    if (!v.pass) {
      ++unexpected_failures;
      return;
    }

    // The extended total must come from an actual walk on the model.
    auto reset = test::typed(read_file(test::corpus_dir() + "/fig1_reset.eca"), m);
    std::string extended = both_energy(reset, m, TimingTable{}, v);
    auto totals = walk_totals(test::fig1(), "a", Rational(40));
    bool thirty_reachable = totals.count(Rational(30)) > 0;
    if (thirty_reachable) {
      ++unexpected_failures;
      v.require(false, "a walk totalling 30 J exists but no driver reproduces it");
      return;
    }
    v.require(extended == "30/1", "extended driver with c->a and a second a->b totals " + extended.substr(0, extended.find('/')) +
                                      " J; no walk from a on the model totals 30 J, so 30 J is unattainable");
  });
}

Verdict ac2(std::size_t& programs, std::size_t& scenarios, double& elapsed) {
  return run_checked([&](Verdict& v) {
    auto t0 = Clock::now();
    for (auto& entry : test::corpus()) {
      ++programs;
      v.require(entry.scenarios.size() >= 3, entry.program.filename().string() + " has fewer than 3 scenarios");
      for (auto& s : entry.scenarios) {
        ++scenarios;
        Outcome o = run_scenario(prepare(s), Engine::Both, {});
        if (o.divergence)
          v.require(false, entry.program.filename().string() + " [" + s.name + "]: " + o.divergence->what);
      }
    }
    elapsed = seconds_since(t0);
    v.require(programs >= 30, "corpus has fewer than 30 programs");
    v.require(elapsed < 60.0, "corpus took longer than 60 s");
  });
}

Verdict ac3() {
  return run_checked([](Verdict& v) {
    ModelSet m = test::models_of({load_model_file(test::model_path("radio.toml"))});
    auto p = test::typed("int main(int k) begin Radio::send(k + 1) end", m);
    const Expr& call = p.function("main")->body;
    ExprTerms ex = transform_expr(p, call.as<expr::ComponentCall>()->args[0], &m);
    ExprTerms t = transform_expr(p, call, &m);
    auto expected = term::plus(
        ex.energy, term::compose(term::scope({"n"}, ex.state, {ex.value}),
                                 term::plus(term::td_component("Radio", "send"),
                                            term::component(TermKind::CmpEnergy, "Radio", "send", {"n"}))));
    v.require(same_shape(*t.energy, *expected), "component call energy term has the wrong shape");

    ModelSet fig1 = test::models_of({test::fig1()});
    auto rec = test::typed(read_file(test::corpus_dir() + "/sum_rec.eca"), fig1);
    Analysis a = transform_program(rec, &fig1);
    std::string main_state = print_symbolic(a.function("main")->state);
    v.require(main_state.find("subst(Σ_sum, rec_Σ(sum))") != std::string::npos, "recursive call is not wrapped in subst");
    std::string sum_state = print_symbolic(a.function("sum")->state);
    v.require(sum_state.find("rec_Σ(sum)") != std::string::npos, "recursive body has no rec placeholder");

    for (const char* name : {"fig1_driver", "sum_rec", "mutual", "radio_guard"}) {
      std::string program = test::corpus_dir() + "/" + name + ".eca";
      PreparedScenario ps = prepare(load_scenarios(sidecar_path(program).string(), program).front());
      std::string printed = print_analysis(transform_program(ps.program.typed, &ps.models));
      std::string golden = read_file(test::source_dir() + "/tests/golden/" + name + ".txt");
      v.require(printed == golden, std::string(name) + " differs from its golden file");
    }
  });
}

Verdict ac4() {
  return run_checked([](Verdict& v) {
    ModelSet m = test::models_of({test::fig1()});
    auto p = test::typed("int main() begin 0 end", m);
    TimingTable t;
    t.set(Construct::Var, Duration::parse("1"));
    MachineState ms;
    ms.locals = LocalState(std::map<std::string, Value>{{"x", Value(1)}});
    ms.components = {{"Dev", "a"}};
    Energy interp = eval_expr(p, build::var("x"), ms, m, t).energy;
    v.require(interp == Energy::parse("8"), "interpreter gives " + interp.str());

    ExprTerms terms = transform_expr(p, build::var("x"), &m);
    Analysis a = transform_program(p, &m);
    Evaluator ev(a, m, t);
    Energy transform = ev.energy(*terms.energy, ms.locals, GState{{}, ms.components});
    v.require(transform == Energy::parse("8"), "transformation gives " + transform.str());

    auto whole = test::typed("int x = 1\nint main() begin x end", m);
    TimingTable var_only = load_timing(read_file(test::model_path("timing/var_only.toml")));
    v.require(both_energy(whole, m, var_only, v) == "8/1", "whole-program variable read is not 8 J");
  });
}

Verdict ac5() {
  return run_checked([](Verdict& v) {
    for (auto& entry : test::corpus())
      for (auto& s : entry.scenarios) {
        if (s.expect_error) continue;
        PreparedScenario p = prepare(s);
        ModelSet doubled = p.models.with_power_scaled(2);
        for (bool transform : {false, true}) {
          auto go = transform ? test::transform : test::interp;
          RunResult base = go(p.program.typed, p.models, p.timing, p.inputs, {});
          RunResult twice = go(p.program.typed, doubled, p.timing, p.inputs, {});
          std::string where = entry.program.filename().string() + " [" + s.name + "]";
          v.require(twice.time_draw_energy == Energy(base.time_draw_energy.value() * 2), where + ": time draw not doubled");
          v.require(twice.transition_energy == base.transition_energy, where + ": transitions changed");
        }
      }
  });
}

Verdict ac6() {
  return run_checked([](Verdict& v) {
    ModelSet m = test::models_of({test::fig1()});
    auto p = test::typed(read_file(test::corpus_dir() + "/sum_rec.eca"), m);
    TimingTable unit = load_timing(read_file(test::model_path("timing/unit.toml")));
    for (int n = 0; n <= 50; ++n) {
      Inputs in{{"n", Value(n)}};
      RunResult i = test::interp(p, m, unit, in);
      RunResult t = test::transform(p, m, unit, in);
      v.require(i.energy == t.energy && i.value == t.value && i.final_globals == t.final_globals,
                "engines disagree at n = " + std::to_string(n));
      v.require(i.value == Value(n * (n + 1) / 2), "wrong sum at n = " + std::to_string(n));
    }
    auto d = test::typed(read_file(test::corpus_dir() + "/divergent.eca"), m);
    auto message = [&](bool transform) -> std::string {
      try {
        (transform ? test::transform : test::interp)(d, m, unit, {{"n", Value(3)}}, {});
      } catch (const RuntimeError& e) {
        if (e.kind() == RuntimeError::Kind::RecursionLimit) return e.what();
        return std::string("other error: ") + e.what();
      }
      return "terminated";
    };
    std::string a = message(false), b = message(true);
    v.require(a.rfind("recursion limit", 0) == 0, "interpreter: " + a);
    v.require(a == b, "limits differ: '" + a + "' vs '" + b + "'");
  });
}

Verdict ac7() {
  return run_checked([](Verdict& v) {
    auto programs = corpus_programs(test::corpus_dir());
    auto ill = test::ill_typed_corpus();
    programs.insert(programs.end(), ill.begin(), ill.end());
    std::size_t deepest = 0;
    for (auto& path : programs) {
      ParseStats stats;
      Program p = parse_source(read_file(path.string()), &stats);
      deepest = std::max(deepest, stats.max_lookahead);
      std::string printed = pretty_print(p);
      v.require(parse_source(printed) == p, path.filename().string() + " does not round-trip");
    }
    v.require(deepest <= 2, "lookahead reached " + std::to_string(deepest));
  });
}

Verdict ac8(std::size_t& rejected) {
  return run_checked([&](Verdict& v) {
    ModelSet m = test::models_of({test::fig1(), load_model_file(test::model_path("radio.toml"))});
    bool struct_condition = false;
    for (auto& path : test::ill_typed_corpus()) {
      std::string src = read_file(path.string());
      auto c = check(parse_source(src), m.signatures());
      bool located = !c.errors.empty();
      for (auto& e : c.errors) located = located && e.span.valid();
      v.require(located, path.filename().string() + " not rejected with a location");
      rejected += located;
      if (path.stem() == "struct_condition")
        struct_condition = !c.errors.empty() && c.errors[0].message.find("expected bool") != std::string::npos;
    }
    v.require(rejected >= 10, "fewer than 10 ill-typed programs");
    v.require(struct_condition, "struct-as-condition case missing or not rejected");
    for (auto& entry : test::corpus())
      for (auto& s : entry.scenarios) {
        ModelSet sm = load_models(s.models);
        auto c = check(parse_source(read_file(entry.program.string())), sm.signatures());
        v.require(c.ok(), entry.program.filename().string() + " falsely rejected");
      }
  });
}

}  // namespace

int main() {
  report("AC1", ac1(), "fig1 drivers: four edges 16 J on both engines", true);
  std::size_t programs = 0, scenarios = 0;
  double elapsed = 0;
  Verdict v2 = ac2(programs, scenarios, elapsed);
  char buf[128];
  std::snprintf(buf, sizeof buf, "oracle equivalence over %zu programs, %zu scenarios in %.2f s", programs, scenarios,
                elapsed);
  report("AC2", v2, buf);
  report("AC3", ac3(), "component-call and recursive-call term shapes, golden terms");
  report("AC4", ac4(), "variable read in state a with t_var = 1 s is 8 J");
  report("AC5", ac5(), "doubling power doubles time draw only, every scenario");
  report("AC6", ac6(), "recursion terminates alike for n in [0, 50]; divergence hits the same limit");
  report("AC7", ac7(), "round-trip and lookahead of at most 2 tokens");
  std::size_t rejected = 0;
  Verdict v8 = ac8(rejected);
  report("AC8", v8, std::to_string(rejected) + " ill-typed programs rejected with locations, no false rejections");
  return unexpected_failures == 0 ? 0 : 1;
}
