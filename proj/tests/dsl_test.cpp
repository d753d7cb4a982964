#include <gtest/gtest.h>

#include <string>

#include "bsv/dsl.hpp"
#include "bsv/properties.hpp"

#ifndef BSV_SCENARIO_DIR
#define BSV_SCENARIO_DIR "scenarios"
#endif

using namespace bsv;

namespace {

Error parse_error(const std::string& text) {
  try {
    parse_scenario_file(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return Error(ErrorKind::Syntax, "none");
}

}  // namespace

TEST(Dsl, ParsesDomainClassesAndScenarios) {
  const auto f = parse_scenario_file(R"(
domain n: int[0..5];
domain open: bool;
class Account {
  invariant: n >= 0;
  method close { post: !open; pre: open; }
}
class Savings extends Account { }
scenario s1 {
  client: Account;
  receiver: Savings;
  call: close;
  prestate { n = 2, open = true }
  poststate { n = 2, open = false }
}
config { strategy: join, client; budget: 4096; reject_is_error: true; }
)");
  const Hierarchy& h = f.hierarchy;
  EXPECT_EQ(h.class_names(), (std::vector<std::string>{"Account", "Savings"}));
  EXPECT_EQ(h.get("Savings").parent, "Account");
  EXPECT_EQ(to_string(h.method_spec("Account", "close").pre), "open");
  EXPECT_EQ(h.domain().budget(), 4096u);
  ASSERT_EQ(f.scenarios.size(), 1u);
  const auto& st = std::get<StateMode>(f.scenarios[0].mode);
  EXPECT_EQ(std::get<bool>(st.post.at("open")), false);
  EXPECT_EQ(f.config.strategies, (std::vector<Strategy>{Strategy::JoinComposition, Strategy::ClientConformance}));
  EXPECT_TRUE(f.config.reject_is_error);
  EXPECT_NE(f.find("s1"), nullptr);
  EXPECT_EQ(f.find("s2"), nullptr);
}

TEST(Dsl, PoststateDefaultsToPrestate) {
  const auto f = parse_scenario_file(std::string(R"(
domain x: int[0..1];
class C { method m { } }
scenario s { client: C; receiver: C; call: m; prestate { x = 1 } }
)"));
  const auto& st = std::get<StateMode>(f.scenarios[0].mode);
  EXPECT_EQ(st.pre, st.post);
  EXPECT_EQ(f.config.strategies.size(), 3u);
}

TEST(Dsl, TruthConfigurations) {
  const auto f = parse_scenario_file(R"(
class C { method m { } }
class SC extends C { method m { } }
truthconfig p4 {
  client: SC; receiver: SC; call: m;
  pre C = true, SC = true;
  post C = false, SC = true;
  inv SC = false;
}
)");
  const auto& tm = std::get<TruthMode>(f.scenarios[0].mode);
  EXPECT_EQ(tm.pre.at("SC"), true);
  EXPECT_EQ(tm.post.at("C"), false);
  EXPECT_EQ(tm.inv.at("SC"), false);
  EXPECT_EQ(tm.inv.count("C"), 0u);
}

TEST(Dsl, ErrorsCarryLineAndColumn) {
  const Error bad_formula = parse_error("domain x: int[0..3];\nclass C {\n  method m { pre: x > ; }\n}\n");
  EXPECT_EQ(bad_formula.line(), 3u);
  EXPECT_EQ(bad_formula.column(), 23u);

  const Error undeclared = parse_error("domain x: int[0..3];\nclass C {\n  method m { pre: y > 0; }\n}\n");
  EXPECT_EQ(undeclared.line(), 3u);
  EXPECT_EQ(undeclared.column(), 19u);

  const Error parent = parse_error("class A { }\n  class B extends Z { }\n");
  EXPECT_EQ(parent.line(), 2u);

  const Error scenario = parse_error(
      "domain x: int[0..3];\nclass C { method m { } }\nscenario s {\n client: C; receiver: C; call: m;\n"
      " prestate { x = 9 }\n}\n");
  EXPECT_EQ(scenario.line(), 3u);
  EXPECT_EQ(scenario.column(), 10u);
}

TEST(Dsl, RejectsMalformedInput) {
  for (const char* text : {
           "domain old: bool;",
           "domain x: int[3..1];",
           "domain x: real;",
           "domain x: bool; domain x: bool;",
           "class C { method m { pre: true; pre: true; } }",
           "class C { method m { } method m { } }",
           "class C { } class C { }",
           "class C { method m { post: old(old(true)); } }",
           "class C { invariant: old(true); }",
           "class C { method m { } } scenario s { client: C; receiver: C; call: n; prestate { } }",
           "class C { method m { } } scenario s { client: C; receiver: C; call: m; prestate { } }"
           " scenario s { client: C; receiver: C; call: m; prestate { } }",
           "class C { method m { } } config { strategy: eiffel; }",
           "class C { method m { } } config { budget: 0; }",
           "class C { method m { } } config { colour: red; }",
           "domain x: bool; class C { method m { } } scenario s { client: C; receiver: C; call: m; prestate { x = 1 } }",
           "domain x: bool; class C { method m { } } scenario s { client: C; receiver: C; call: m; prestate { } }",
           "class C { method m { } } truthconfig t { client: C; receiver: C; call: m; pre C = 1; }",
           "class C {",
       }) {
    EXPECT_THROW(parse_scenario_file(text), Error) << text;
  }
}

TEST(Dsl, SerializeRoundTripsExamples) {
  for (const char* name : {"example1.bsv", "example2.bsv", "example3.bsv"}) {
    const auto f = load_scenario_file(std::string(BSV_SCENARIO_DIR) + "/" + name);
    const std::string text = serialize(f.hierarchy);
    const Hierarchy again = parse_hierarchy(text);
    EXPECT_EQ(again, f.hierarchy) << name;
    EXPECT_EQ(serialize(again), text) << name;
  }
}

TEST(Dsl, SerializeRoundTripsRandomHierarchies) {
  for (const Hierarchy& h : random_hierarchies(200, 11, kDefaultBudget)) {
    const std::string text = serialize(h);
    EXPECT_EQ(parse_hierarchy(text), h) << text;
  }
}

TEST(Dsl, MissingFileIsAnInputError) {
  EXPECT_THROW(load_scenario_file("/nonexistent/x.bsv"), Error);
}
