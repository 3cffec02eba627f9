#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace eca;

namespace {

const char* kTiny = R"(
name = "T"
initial = "a"
[states.a]
power = "1"
[states.b]
power = "2"
)";

ModelLoad load_with(const std::string& functions) { return load_model(std::string(kTiny) + functions); }

bool has_message(const std::vector<std::string>& ms, const std::string& needle) {
  for (auto& m : ms)
    if (m.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(Model, Fig1Loads) {
  ComponentModel m = test::fig1();
  EXPECT_EQ(m.name, "Dev");
  EXPECT_EQ(m.initial, "a");
  EXPECT_EQ(m.states, (std::vector<std::string>{"a", "b", "c", "d"}));
  EXPECT_EQ(power_draw(m, "a"), Power::parse("8"));
  EXPECT_EQ(power_draw(m, "b"), Power::parse("1"));
  EXPECT_EQ(power_draw(m, "c"), Power::parse("0"));
  EXPECT_EQ(power_draw(m, "d"), Power::parse("4"));
  std::map<std::string, std::string> edges;
  for (auto& [name, f] : m.functions)
    for (auto& t : f.transitions) edges[t.from + t.to] = t.energy.fraction();
  EXPECT_EQ(edges, (std::map<std::string, std::string>{
                       {"ab", "4/1"}, {"bb", "8/1"}, {"bc", "3/1"}, {"cd", "1/1"}, {"ca", "10/1"}}));
}

TEST(Model, Fig1WarnsAboutTheSinkState) {
  auto loaded = load_model(read_file(test::model_path("fig1.toml")));
  ASSERT_TRUE(loaded.ok());
  EXPECT_TRUE(loaded.errors.empty());
  EXPECT_TRUE(has_message(loaded.warnings, "state 'd' has no outgoing transitions"));
}

TEST(Model, TransitionToUndeclaredState) {
  auto l = load_with("[functions.f]\ntransitions = [{ from = \"a\", to = \"z\", energy = \"1\" }]\n");
  EXPECT_FALSE(l.ok());
  EXPECT_TRUE(has_message(l.errors, "'z'"));
}

TEST(Model, NegativeEnergyBreaksMonotonicity) {
  auto l = load_with("[functions.f]\ntransitions = [{ from = \"a\", to = \"b\", energy = \"-1\" }]\n");
  EXPECT_FALSE(l.ok());
  auto p = load_model("name = \"T\"\ninitial = \"a\"\n[states.a]\npower = \"-1/2\"\n");
  EXPECT_FALSE(p.ok());
}

TEST(Model, DuplicateUnguardedTransitions) {
  auto l = load_with(
      "[functions.f]\ntransitions = [{ from = \"a\", to = \"b\", energy = \"1\" }, { from = \"a\", to = \"a\", energy "
      "= \"1\" }]\n");
  EXPECT_FALSE(l.ok());
}

TEST(Model, GuardOnUnknownParameter) {
  auto l = load_with("[functions.f]\ntransitions = [{ from = \"a\", guard = \"arg0 > 0\", to = \"b\" }]\n");
  EXPECT_FALSE(l.ok());
  EXPECT_TRUE(has_message(l.errors, "arg0"));
}

TEST(Model, FloatsAreNotAllowedInGuards) {
  auto l = load_with(
      "[functions.f]\nparams = [{ name = \"x\", type = \"float\" }]\ntransitions = [{ from = \"a\", guard = \"x > 0\", "
      "to = \"b\" }]\n");
  EXPECT_FALSE(l.ok());
}

TEST(Model, LongDecimalsAreALoadError) {
  auto l = load_model("name = \"T\"\ninitial = \"a\"\n[states.a]\npower = \"0.1234567891\"\n");
  EXPECT_FALSE(l.ok());
  auto ok = load_model("name = \"T\"\ninitial = \"a\"\n[states.a]\npower = \"0.123456789\"\n");
  ASSERT_TRUE(ok.ok());
  EXPECT_EQ(ok.model->power.at("a").fraction(), "123456789/1000000000");
}

TEST(Model, UnreachableStatesWarn) {
  auto l = load_with("[functions.f]\ntransitions = [{ from = \"a\", to = \"a\" }]\n");
  ASSERT_TRUE(l.ok());
  EXPECT_TRUE(has_message(l.warnings, "unreachable"));
}

TEST(Model, UnknownKeysAreRejected) {
  EXPECT_FALSE(load_with("[functions.f]\ncost = \"1\"\n").ok());
  EXPECT_FALSE(load_model(std::string(kTiny) + "colour = \"red\"\n").ok());
}

TEST(Step, Fig1Edges) {
  ComponentModel m = test::fig1();
  StepResult r = step(m, "a", "start", {});
  EXPECT_EQ(r.to, "b");
  EXPECT_EQ(r.energy, Energy::parse("4"));
  EXPECT_EQ(r.duration, Duration());
  EXPECT_EQ(r.value, Value::unit());
  StepResult loop = step(m, "b", "loop", {});
  EXPECT_EQ(loop.to, "b");
  EXPECT_EQ(loop.energy, Energy::parse("8"));
}

TEST(Step, SinkStateHasNoMoves) {
  ComponentModel m = test::fig1();
  for (auto& [name, f] : m.functions) EXPECT_THROW(step(m, "d", name, {}), StepError) << name;
}

TEST(Step, GuardsAndReturnsOfTheRadio) {
  ComponentModel radio = load_model_file(test::model_path("radio.toml"));
  StepResult small = step(radio, "idle", "send", {Value(8)});
  EXPECT_EQ(small.energy, Energy::parse("1"));
  EXPECT_EQ(small.value, Value(8));
  EXPECT_EQ(small.duration, Duration::parse("1/2"));
  StepResult big = step(radio, "idle", "send", {Value(9)});
  EXPECT_EQ(big.energy, Energy::parse("4"));
  EXPECT_EQ(big.value, Value(8));
  EXPECT_EQ(step(radio, "tx", "ack", {Value(true)}).to, "idle");
  EXPECT_EQ(step(radio, "tx", "ack", {Value(false)}).to, "tx");
  EXPECT_EQ(step(radio, "idle", "ack", {Value(false)}).value, Value(false));
}

TEST(Step, IsDeterministic) {
  ComponentModel radio = load_model_file(test::model_path("radio.toml"));
  for (int n = -3; n < 20; ++n) {
    StepResult a = step(radio, "idle", "send", {Value(n)});
    StepResult b = step(radio, "idle", "send", {Value(n)});
    EXPECT_EQ(a.to, b.to);
    EXPECT_EQ(a.energy, b.energy);
    EXPECT_EQ(a.value, b.value);
  }
}

TEST(Power, UnknownStateIsAnError) { EXPECT_ANY_THROW(power_draw(test::fig1(), "z")); }

TEST(Power, PhiSumsOverComponents) {
  ComponentModel dev = test::fig1();
  ComponentModel other = dev;
  other.name = "Dev2";
  ModelSet one = test::models_of({dev});
  ModelSet two = test::models_of({dev, other});
  EXPECT_EQ(phi_total(one, {{"Dev", "a"}}), Power::parse("8"));
  EXPECT_EQ(phi_total(two, {{"Dev", "a"}, {"Dev2", "d"}}), Power::parse("12"));
  EXPECT_EQ(phi_total(ModelSet{}, {}), Power());
  EXPECT_THROW(phi_total(two, {{"Dev", "a"}}), std::out_of_range);
}

TEST(Power, AddingAComponentAddsItsDraw) {
  ComponentModel dev = test::fig1();
  ComponentModel sensor = load_model_file(test::model_path("sensor.toml"));
  ModelSet one = test::models_of({dev});
  ModelSet two = test::models_of({dev, sensor});
  for (auto& s : dev.states)
    for (auto& t : sensor.states)
      EXPECT_EQ(phi_total(two, {{"Dev", s}, {"Sensor", t}}), phi_total(one, {{"Dev", s}}) + power_draw(sensor, t));
}

TEST(Power, ScalingDoublesEveryState) {
  ComponentModel dev = test::fig1();
  ComponentModel doubled = dev.with_power_scaled(2);
  for (auto& s : dev.states) EXPECT_EQ(power_draw(doubled, s), Power(power_draw(dev, s).value() * 2));
  EXPECT_EQ(doubled.functions.at("reset").transitions[0].energy, Energy::parse("10"));
}

TEST(Timing, LoadsKnownKeysOnly) {
  TimingTable t = load_timing(read_file(test::model_path("timing/fractional.toml")));
  EXPECT_EQ(t[Construct::Var], Duration::parse("1/10"));
  EXPECT_EQ(t[Construct::Seq], Duration::parse("1/50"));
  EXPECT_THROW(load_timing("t_bogus = \"1\"\n"), TimingError);
  EXPECT_THROW(load_timing("t_var = \"-1\"\n"), TimingError);
  EXPECT_TRUE(load_timing("").all_zero());
}
