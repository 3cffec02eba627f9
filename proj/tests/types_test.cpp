#include "helpers.hpp"

#include <gtest/gtest.h>

using namespace eca;

namespace {

std::vector<TypeError> errors_of(const std::string& src, const ModelSet& models = {}) {
  return check(parse_source(src), models.signatures()).errors;
}

ModelSet fig1_and_radio() { return test::models_of({test::fig1(), load_model_file(test::model_path("radio.toml"))}); }

}  // namespace

TEST(Checker, StructAsIfConditionIsRejected) {
  auto errs = errors_of("struct S begin int a; end\nint main() begin S s = S(1); if s then skip end, 0 end");
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_NE(errs[0].message.find("expected bool"), std::string::npos);
  EXPECT_EQ(errs[0].expected, Type::bool_());
  EXPECT_EQ(errs[0].found, Type::struct_("S"));
  EXPECT_EQ(errs[0].span.line, 2u);
}

TEST(Checker, IntPlusBool) {
  auto errs = errors_of("int main() begin 1 + true end");
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_EQ(errs[0].expected, Type::int_());
  EXPECT_EQ(errs[0].found, Type::bool_());
}

TEST(Checker, Fig1DriverIsWellTyped) {
  ModelSet m = test::models_of({test::fig1()});
  auto errs = errors_of(read_file(test::corpus_dir() + "/fig1_driver.eca"), m);
  EXPECT_TRUE(errs.empty());
}

TEST(Checker, ResolveStructGivesDeclarationOrder) {
  auto c = check(parse_source("struct Point begin int x; int y; end\nstruct Seg begin Point a; Point b; end"), {});
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(resolve_struct(c.typed, "Point"), (StructLayout{{"x", Type::int_()}, {"y", Type::int_()}}));
  EXPECT_EQ(resolve_struct(c.typed, "Seg")[1].second, Type::struct_("Point"));
  EXPECT_THROW(resolve_struct(c.typed, "Nope"), std::out_of_range);
}

TEST(Checker, AnnotatesExpressionTypes) {
  auto c = check(parse_source("float main(float x) begin x * 2.0 end"), {});
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(c.typed.function("main")->body.type, Type::float_());
  EXPECT_EQ(c.typed.functions.at("main").params, std::vector<Type>{Type::float_()});
}

TEST(Checker, IsIdempotentUpToErasure) {
  for (auto& entry : test::corpus()) {
    Program p = parse_source(read_file(entry.program.string()));
    ModelSet m = load_models(entry.scenarios.front().models);
    auto c1 = check(p, m.signatures());
    ASSERT_TRUE(c1.ok()) << entry.program;
    EXPECT_EQ(c1.typed.program, p);
    auto c2 = check(c1.typed.program, m.signatures());
    EXPECT_TRUE(c2.ok());
    EXPECT_EQ(c2.typed.program, p);
  }
}

TEST(Checker, LocalShadowsGlobalWithItsOwnType) {
  auto c = check(parse_source("bool x = true\nint main() begin int x = 3, x + 1 end"), {});
  EXPECT_TRUE(c.ok());
  auto errs = errors_of("bool x = true\nint main() begin x + 1 end");
  EXPECT_EQ(errs.size(), 1u);
}

TEST(Checker, BlocksOpenChildScopes) {
  EXPECT_FALSE(errors_of("int main() begin if true then int y = 1 end, y end").empty());
  EXPECT_TRUE(errors_of("int main() begin int y = 0; if true then int y = 1 end, y end").empty());
}

TEST(Checker, RedeclarationInTheSameScope) {
  EXPECT_FALSE(errors_of("int main() begin int y = 0; int y = 1, y end").empty());
  EXPECT_FALSE(errors_of("int f(int a, int a) begin a end\nint main() begin f(1, 2) end").empty());
}

TEST(Checker, NoImplicitIntToFloat) {
  EXPECT_FALSE(errors_of("float main() begin float f = 1, f end").empty());
  EXPECT_FALSE(errors_of("bool main() begin 1 < 1.0 end").empty());
}

TEST(Checker, ComponentCallsUseModelSignatures) {
  ModelSet m = fig1_and_radio();
  EXPECT_TRUE(errors_of("int main() begin Radio::on(); Dev::start(), Radio::send(3) end", m).empty());
  EXPECT_FALSE(errors_of("int main() begin Radio::send(true) end", m).empty());
  EXPECT_FALSE(errors_of("int main() begin Radio::send() end", m).empty());
  EXPECT_FALSE(errors_of("int main() begin Dev::start() end", m).empty());
  EXPECT_FALSE(errors_of("void main() begin Dev::explode() end", m).empty());
}

TEST(Checker, StructsNeverReachComponents) {
  ModelSet m = fig1_and_radio();
  auto errs = errors_of("struct S begin int n; end\nint main() begin S s = S(1), Radio::send(s) end", m);
  ASSERT_EQ(errs.size(), 1u);
  EXPECT_NE(errs[0].message.find("struct"), std::string::npos);
}

TEST(Checker, MutualRecursionNeedsNoForwardDeclaration) {
  EXPECT_TRUE(errors_of("int a(int n) begin b(n) end\nint b(int n) begin a(n) end\nint main() begin a(1) end").empty());
}

TEST(Checker, GlobalInitializersSeeOnlyEarlierGlobals) {
  EXPECT_TRUE(errors_of("int a = 1\nint b = a + 1\nint main() begin b end").empty());
  EXPECT_FALSE(errors_of("int b = a + 1\nint a = 1\nint main() begin b end").empty());
}

TEST(Checker, IllTypedCorpusIsRejectedWithLocations) {
  ModelSet m = fig1_and_radio();
  auto files = test::ill_typed_corpus();
  ASSERT_GE(files.size(), 10u);
  bool saw_struct_condition = false;
  for (auto& path : files) {
    std::string src = read_file(path.string());
    auto errs = errors_of(src, m);
    ASSERT_FALSE(errs.empty()) << path;
    for (auto& e : errs) {
      EXPECT_TRUE(e.span.valid()) << path << ": " << e.message;
      EXPECT_LE(e.span.offset, src.size());
    }
    if (path.stem() == "struct_condition") {
      saw_struct_condition = true;
      EXPECT_NE(errs[0].message.find("if condition: expected bool, found Flag"), std::string::npos);
    }
  }
  EXPECT_TRUE(saw_struct_condition);
}

TEST(Checker, WellTypedCorpusHasNoFalseRejections) {
  auto entries = test::corpus();
  ASSERT_GE(entries.size(), 30u);
  for (auto& entry : entries)
    for (auto& s : entry.scenarios) {
      ModelSet m = load_models(s.models);
      EXPECT_TRUE(errors_of(read_file(entry.program.string()), m).empty()) << entry.program << " " << s.name;
    }
}
