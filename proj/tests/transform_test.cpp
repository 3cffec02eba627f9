#include "helpers.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <sstream>

using namespace eca;

namespace {

const char* kToggle = R"(
name = "Toggle"
initial = "lo"
[states.lo]
power = "1"
[states.hi]
power = "3"
[functions.flip]
time = "1/2"
transitions = [
  { from = "lo", to = "hi", energy = "2" },
  { from = "hi", to = "lo", energy = "1" },
]
)";

ModelSet toggle() { return test::models_of({*load_model(kToggle).model}); }

ModelSet radio() { return test::models_of({load_model_file(test::model_path("radio.toml"))}); }

TimingTable fractional() { return load_timing(read_file(test::model_path("timing/fractional.toml"))); }

Expr main_body(const TypedProgram& p) { return p.function("main")->body; }

// Statements of a `void main` whose body is s1; s2; ...; sn.
std::vector<Stmt> main_stmts(const TypedProgram& p) {
  std::vector<Stmt> out;
  Stmt s = *p.function("main")->body.as<expr::Comma>()->first;
  while (auto seq = s.as<stmt::Seq>()) {
    out.push_back(*seq->first);
    Stmt next = *seq->second;
    s = next;
  }
  out.push_back(s);
  return out;
}

void walk(const Term& t, const std::function<void(const Term&)>& fn, bool into_subst = false) {
  fn(t);
  if (t.kind == TermKind::Subst && !into_subst) return;
  for (auto& k : t.kids) walk(*k, fn, into_subst);
}

std::vector<const Term*> recs_in(const Term& t) {
  std::vector<const Term*> out;
  walk(t, [&](const Term& n) {
    if (n.kind == TermKind::Rec) out.push_back(&n);
  });
  return out;
}

std::vector<TermPtr> all_terms(const Analysis& a) {
  std::vector<TermPtr> out;
  for (auto& [n, f] : a.functions) out.insert(out.end(), {f.value, f.state, f.energy});
  for (auto& g : a.globals) out.insert(out.end(), {g.state, g.energy});
  out.insert(out.end(), {a.init_state, a.init_energy});
  if (a.has_main) out.insert(out.end(), {a.program_value, a.program_state, a.program_energy});
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Transform, ConstantShape) {
  auto p = test::typed("int main() begin 5 end");
  ExprTerms t = transform_expr(p, parse_expression("5"));
  EXPECT_TRUE(same_shape(*t.value, *term::const_v(Value(5))));
  EXPECT_TRUE(same_shape(*t.state, *term::id()));
  EXPECT_TRUE(same_shape(*t.energy, *term::td(Construct::Const)));
}

TEST(Transform, VariableShape) {
  auto p = test::typed("int main() begin 5 end");
  ExprTerms t = transform_expr(p, build::var("x"));
  EXPECT_TRUE(same_shape(*t.value, *term::lookup("x")));
  EXPECT_TRUE(same_shape(*t.state, *term::id()));
  EXPECT_EQ(print_symbolic(t.energy), "td_ec(t_var)");
}

TEST(Transform, SkipShape) {
  auto p = test::typed("int main() begin 5 end");
  StmtTerms t = transform_stmt(p, build::skip());
  EXPECT_TRUE(same_shape(*t.state, *term::id()));
  EXPECT_TRUE(same_shape(*t.energy, *term::td(Construct::Skip)));
}

TEST(Transform, ComponentCallFollowsTheCallRule) {
  ModelSet m = radio();
  auto p = test::typed("int main(int k) begin Radio::send(k + 1) end", m);
  Expr call = main_body(p);
  Expr arg = call.as<expr::ComponentCall>()->args[0];
  ExprTerms ex = transform_expr(p, arg, &m);
  ExprTerms t = transform_expr(p, call, &m);

  auto sc = term::scope({"n"}, ex.state, {ex.value});
  auto e_f = term::component(TermKind::CmpEnergy, "Radio", "send", {"n"});
  auto expected_e = term::plus(ex.energy, term::compose(sc, term::plus(term::td_component("Radio", "send"), e_f)));
  EXPECT_TRUE(same_shape(*t.energy, *expected_e)) << print_symbolic(t.energy);
  auto expected_v = term::compose(sc, term::component(TermKind::CmpValue, "Radio", "send", {"n"}));
  EXPECT_TRUE(same_shape(*t.value, *expected_v));
  auto expected_s =
      term::split(ex.state, term::compose(sc, term::component(TermKind::CmpEffect, "Radio", "send", {"n"})));
  EXPECT_TRUE(same_shape(*t.state, *expected_s));
  EXPECT_NE(print_symbolic(t.energy).find("td_ec(t_f) (+) E[Radio::send]"), std::string::npos);
}

TEST(Transform, NullaryComponentCallIsExactlyTheRule) {
  ModelSet m = test::models_of({test::fig1()});
  auto p = test::typed("void main() begin Dev::start() end", m);
  ExprTerms t = transform_expr(p, build::cmp_call("Dev", "start"), &m);
  auto expected = term::plus(term::zero(), term::compose(term::id(), term::plus(term::td_component("Dev", "start"),
                                                                                term::component(TermKind::CmpEnergy, "Dev", "start", {}))));
  EXPECT_TRUE(same_shape(*t.energy, *expected));
  EXPECT_EQ(print_symbolic(t.energy), "0 (+) (id >> (td_ec(t_f) (+) E[Dev::start]))");
}

TEST(Transform, SameShapeSeesDifferences) {
  auto a = term::plus(term::td(Construct::Var), term::zero());
  EXPECT_TRUE(same_shape(*a, *term::plus(term::td(Construct::Var), term::zero())));
  EXPECT_FALSE(same_shape(*a, *term::plus(term::td(Construct::Const), term::zero())));
  EXPECT_FALSE(same_shape(*a, *term::plus(term::zero(), term::td(Construct::Var))));
  EXPECT_FALSE(same_shape(*term::lookup("x"), *term::lookup("y")));
}

TEST(Transform, RecursiveCallsUseSubstitution) {
  ModelSet m = test::models_of({test::fig1()});
  auto p = test::typed(read_file(test::corpus_dir() + "/sum_rec.eca"), m);
  Analysis a = transform_program(p, &m);
  const FunctionTerms* sum = a.function("sum");
  ASSERT_TRUE(sum);
  std::set<std::string> rec_texts;
  for (auto& t : {sum->value, sum->state, sum->energy})
    for (auto r : recs_in(*t)) {
      EXPECT_EQ(r->name, "sum");
      rec_texts.insert(print_symbolic(*r));
    }
  EXPECT_EQ(rec_texts, (std::set<std::string>{"rec_V(sum)", "rec_Σ(sum)", "rec_E(sum)"}));
  const FunctionTerms* main = a.function("main");
  EXPECT_NE(print_symbolic(main->state).find("subst(Σ_sum, rec_Σ(sum))"), std::string::npos);
  EXPECT_NE(print_symbolic(main->value).find("subst(V_sum, rec_V(sum))"), std::string::npos);
  EXPECT_NE(print_symbolic(main->energy).find("subst(E_sum, rec_E(sum))"), std::string::npos);
  EXPECT_TRUE(recs_in(*main->state).empty());
}

TEST(Transform, RecNodesPrintByName) {
  EXPECT_EQ(print_symbolic(term::rec(Sort::Value, "f")), "rec_V(f)");
  EXPECT_EQ(print_symbolic(term::subst("f", term::rec(Sort::State, "f"))), "subst(Σ_f, rec_Σ(f))");
}

TEST(Transform, NonRecursiveProgramsHaveNoRec) {
  auto p = test::typed("int f(int x) begin x * 2 end\nint g(int y) begin f(y) + f(1) end\nint main() begin g(3) end");
  Analysis a = transform_program(p);
  for (auto& t : all_terms(a)) EXPECT_TRUE(recs_in(*t).empty()) << print_symbolic(t);
  bool g_references_f = false;
  walk(*a.function("g")->value, [&](const Term& n) {
    if (n.kind == TermKind::Subst && n.name == "f") {
      g_references_f = true;
      EXPECT_EQ(n.kids[0], a.function("f")->subst(n.sort)->kids[0]);
    }
  });
  EXPECT_TRUE(g_references_f);
}

TEST(Transform, RecOnlyInsideTheFunctionTable) {
  for (auto& entry : test::corpus()) {
    PreparedScenario p = prepare(entry.scenarios.front());
    Analysis a = transform_program(p.program.typed, &p.models);
    for (auto& g : a.globals) {
      EXPECT_TRUE(recs_in(*g.state).empty());
      EXPECT_TRUE(recs_in(*g.energy).empty());
    }
    for (auto& t : {a.program_value, a.program_state, a.program_energy}) EXPECT_TRUE(recs_in(*t).empty());
    for (auto& [name, f] : a.functions) {
      EXPECT_EQ(f.subst_value->kids[0], f.value);
      EXPECT_EQ(f.subst_state->kids[0], f.state);
      EXPECT_EQ(f.subst_energy->kids[0], f.energy);
      for (auto& t : {f.value, f.state, f.energy})
        for (auto r : recs_in(*t)) EXPECT_TRUE(a.function(r->name)) << entry.program << ": " << r->name;
    }
  }
}

TEST(Transform, SequenceComposes) {
  ModelSet m = toggle();
  auto p = test::typed("void main(int x) begin Toggle::flip(); x = x + 1 end", m);
  auto stmts = main_stmts(p);
  ASSERT_EQ(stmts.size(), 2u);
  StmtTerms s1 = transform_stmt(p, stmts[0], &m);
  StmtTerms s2 = transform_stmt(p, stmts[1], &m);
  StmtTerms both = transform_stmt(p, *p.function("main")->body.as<expr::Comma>()->first, &m);
  EXPECT_TRUE(same_shape(*both.state, *term::compose(s1.state, s2.state)));
  EXPECT_TRUE(same_shape(*both.energy,
                         *term::plus(term::td(Construct::Seq), term::plus(s1.energy, term::compose(s1.state, s2.energy)))))
      << print_symbolic(both.energy);
}

TEST(Transform, FalseWhileCostsOnlyItsCondition) {
  ModelSet m = test::models_of({test::fig1()});
  auto p = test::typed("void main(bool x) begin while x begin Dev::start() end end", m);
  Stmt w = main_stmts(p)[0];
  StmtTerms t = transform_stmt(p, w, &m);
  Analysis a = transform_program(p, &m);
  TimingTable timing = test::timing_with({{Construct::Var, 1}, {Construct::While, 1}});
  LocalState ps(std::map<std::string, Value>{{"x", Value(false)}});
  for (const char* s : {"a", "b", "c"}) {
    GState gs{{}, {{"Dev", s}}};
    Evaluator ev(a, m, timing);
    Energy e = ev.energy(*t.energy, ps, gs);
    MachineState ms{ps, {}, {{"Dev", s}}};
    RunResult oracle = exec_stmt(p, w, ms, m, timing);
    EXPECT_EQ(e, oracle.energy) << s;
    EXPECT_EQ(ev.state(*t.state, ps, gs).gs.components.at("Dev"), s);
  }
}

TEST(Transform, Fig1DriverEvaluatesTo16J) {
  ModelSet m = test::models_of({test::fig1()});
  auto p = test::typed("void main() begin Dev::start(); Dev::loop(); Dev::advance(); Dev::finish() end", m);
  RunResult r = test::transform(p, m, TimingTable{});
  EXPECT_EQ(r.energy, Energy::parse("16"));
  EXPECT_EQ(r.final_components.at("Dev"), "d");
}

TEST(Transform, EvaluationIsPure) {
  ModelSet m = test::models_of({test::fig1()});
  auto p = test::typed(read_file(test::corpus_dir() + "/sum_rec.eca"), m);
  Analysis a = transform_program(p, &m);
  std::string before = print_analysis(a);
  Inputs in{{"n", Value(7)}};
  RunResult r1 = run_with_stack(kEngineStackBytes, [&] { return evaluate(a, m, fractional(), in); });
  RunResult r2 = run_with_stack(kEngineStackBytes, [&] { return evaluate(a, m, fractional(), in); });
  EXPECT_EQ(r1.energy, r2.energy);
  EXPECT_EQ(r1.value, r2.value);
  EXPECT_EQ(r1.trace, r2.trace);
  EXPECT_EQ(print_analysis(a), before);
}

TEST(Transform, OneAnalysisManyScenarios) {
  ModelSet fig1 = test::models_of({test::fig1()});
  ModelSet timed = test::models_of({load_model_file(test::model_path("fig1_timed.toml"))});
  ModelSet low = test::models_of({load_model_file(test::model_path("fig1_lowpower.toml"))});
  auto p = test::typed(read_file(test::corpus_dir() + "/sum_rec.eca"), fig1);
  Analysis a = transform_program(p, &fig1);
  struct Case {
    const ModelSet* models;
    TimingTable timing;
    int n;
  };
  std::vector<Case> cases{{&fig1, TimingTable{}, 3}, {&timed, fractional(), 10}, {&low, TimingTable::uniform(Duration::parse("1")), 25}};
  for (auto& c : cases) {
    Inputs in{{"n", Value(c.n)}};
    RunResult t = run_with_stack(kEngineStackBytes, [&] { return evaluate(a, *c.models, c.timing, in); });
    RunResult i = test::interp(p, *c.models, c.timing, in);
    EXPECT_EQ(t.energy, i.energy) << c.n;
    EXPECT_EQ(t.value, i.value);
    EXPECT_EQ(t.final_globals, i.final_globals);
    EXPECT_EQ(t.final_components, i.final_components);
  }
}

class StateGrid : public ::testing::Test {
 protected:
  void SetUp() override {
    models = toggle();
    program = test::typed("void main(int x) begin Toggle::flip(); x = x * 2 + 1; if x > 3 then Toggle::flip() end end",
                          models);
    analysis = transform_program(program, &models);
    for (auto& s : main_stmts(program)) parts.push_back(transform_stmt(program, s, &models));
    timing = fractional();
  }

  template <class Fn>
  void each_state(Fn fn) {
    for (const char* c : {"lo", "hi"})
      for (int x = -1; x < 4; ++x) fn(LocalState(std::map<std::string, Value>{{"x", Value(x)}}), GState{{}, {{"Toggle", c}}});
  }

  ModelSet models;
  TypedProgram program;
  Analysis analysis;
  std::vector<StmtTerms> parts;
  TimingTable timing;
};

TEST_F(StateGrid, ComposeIsAssociative) {
  ASSERT_EQ(parts.size(), 3u);
  const StmtTerms &a = parts[0], &b = parts[1], &c = parts[2];
  each_state([&](const LocalState& ps, const GState& gs) {
    Evaluator ev(analysis, models, timing);
    auto left = term::compose(term::compose(a.state, b.state), c.state);
    auto right = term::compose(a.state, term::compose(b.state, c.state));
    EXPECT_EQ(ev.state(*left, ps, gs), ev.state(*right, ps, gs));
    auto left_e = term::compose(term::compose(a.state, b.state), c.energy);
    auto right_e = term::compose(a.state, term::compose(b.state, c.energy));
    EXPECT_EQ(ev.energy(*left_e, ps, gs), ev.energy(*right_e, ps, gs));
  });
}

TEST_F(StateGrid, PlusAddsBothOperandsOnTheSameInput) {
  each_state([&](const LocalState& ps, const GState& gs) {
    for (auto& e1 : parts)
      for (auto& e2 : parts) {
        Evaluator ev(analysis, models, timing);
        Energy sum = ev.energy(*term::plus(e1.energy, e2.energy), ps, gs);
        Evaluator one(analysis, models, timing);
        Evaluator two(analysis, models, timing);
        EXPECT_EQ(sum, one.energy(*e1.energy, ps, gs) + two.energy(*e2.energy, ps, gs));
      }
  });
}

TEST_F(StateGrid, StatementTermsMatchTheInterpreter) {
  auto stmts = main_stmts(program);
  each_state([&](const LocalState& ps, const GState& gs) {
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      Evaluator ev(analysis, models, timing);
      Energy e = ev.energy(*parts[i].energy, ps, gs);
      StatePair s = ev.state(*parts[i].state, ps, gs);
      RunResult r = exec_stmt(program, stmts[i], MachineState{ps, gs.globals, gs.components}, models, timing);
      EXPECT_EQ(e, r.energy);
      EXPECT_EQ(s.ps, r.final_locals);
      EXPECT_EQ(s.gs.components, r.final_components);
    }
  });
}

TEST(Transform, AgreesWithTheInterpreterOnTheCorpus) {
  std::size_t scenarios = 0;
  for (auto& entry : test::corpus())
    for (auto& s : entry.scenarios) {
      PreparedScenario p = prepare(s);
      Outcome o = run_scenario(p, Engine::Both, {});
      EXPECT_FALSE(o.divergence) << entry.program << " " << s.name << ": " << o.divergence->what;
      ++scenarios;
    }
  EXPECT_GE(scenarios, 90u);
}

TEST(Transform, ScalingPowerScalesOnlyTimeDraw) {
  for (auto& entry : test::corpus())
    for (auto& s : entry.scenarios) {
      if (s.expect_error) continue;
      PreparedScenario p = prepare(s);
      RunResult base = test::transform(p.program.typed, p.models, p.timing, p.inputs);
      RunResult twice = test::transform(p.program.typed, p.models.with_power_scaled(2), p.timing, p.inputs);
      EXPECT_EQ(twice.time_draw_energy, Energy(base.time_draw_energy.value() * 2)) << entry.program;
      EXPECT_EQ(twice.transition_energy, base.transition_energy) << entry.program;
    }
}

TEST(Transform, PrintedAnalysisMatchesGoldenFiles) {
  for (const char* name : {"fig1_driver", "sum_rec", "mutual", "radio_guard"}) {
    std::string program = test::corpus_dir() + "/" + name + ".eca";
    auto scenarios = load_scenarios(sidecar_path(program).string(), program);
    PreparedScenario p = prepare(scenarios.front());
    std::string printed = print_analysis(transform_program(p.program.typed, &p.models));
    EXPECT_EQ(printed, print_analysis(transform_program(p.program.typed, &p.models)));
    EXPECT_EQ(printed, slurp(test::source_dir() + "/tests/golden/" + name + ".txt")) << name;
  }
}
