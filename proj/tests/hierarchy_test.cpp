#include <gtest/gtest.h>

#include "bsv/dsl.hpp"
#include "bsv/hierarchy.hpp"
#include "bsv/runtime.hpp"
#include "bsv/tables.hpp"

using namespace bsv;

namespace {

const char* kExampleOne = R"(
domain x: int[-3..3];
class C { method m { pre: x > 0; post: true; } }
class SC extends C { method m { pre: x < 0; post: true; } }
)";

const char* kThreeLevel = R"(
domain x: int[-3..3];
class C { method m { pre: x > 0; post: x > 1; } method n { pre: true; } }
class SC extends C { }
class SSC extends SC { method m { pre: x > 0 || x == 0; post: x > 0; } }
)";

}  // namespace

TEST(Hierarchy, SupersOfIsRootFirst) {
  const Hierarchy h = parse_hierarchy(kThreeLevel);
  EXPECT_EQ(h.supers_of("SSC"), (std::vector<std::string>{"C", "SC", "SSC"}));
  EXPECT_EQ(h.supers_of("C"), (std::vector<std::string>{"C"}));
  EXPECT_THROW(h.supers_of("X"), Error);
}

TEST(Hierarchy, SupersOfExtendsParentChain) {
  const Hierarchy h = parse_hierarchy(kThreeLevel);
  for (const auto& c : h.class_names()) {
    const auto chain = h.supers_of(c);
    if (const auto& p = h.get(c).parent) {
      auto parent_chain = h.supers_of(*p);
      parent_chain.push_back(c);
      EXPECT_EQ(chain, parent_chain);
    }
  }
}

TEST(Hierarchy, ResolveMethodPicksMostDerivedDeclaration) {
  const Hierarchy one = parse_hierarchy(kExampleOne);
  EXPECT_EQ(one.resolve_method("SC", "m"), "SC");
  const Hierarchy h = parse_hierarchy(kThreeLevel);
  EXPECT_EQ(h.resolve_method("SC", "m"), "C");
  EXPECT_EQ(h.resolve_method("SSC", "m"), "SSC");
  EXPECT_EQ(h.resolve_method("SSC", "n"), "C");
  EXPECT_THROW(h.resolve_method("SSC", "zzz"), Error);
  for (const auto& c : h.class_names()) {
    for (const auto& m : h.method_names()) {
      const std::string r = h.resolve_method(c, m);
      EXPECT_TRUE(h.is_super_of(r, c));
      EXPECT_TRUE(h.declares(r, m));
      const auto chain = h.supers_of(c);
      for (auto it = std::find(chain.begin(), chain.end(), r) + 1; it != chain.end(); ++it) {
        EXPECT_FALSE(h.declares(*it, m));
      }
    }
  }
}

TEST(Hierarchy, SpecChainListsDeclaringClassesOnly) {
  const Hierarchy h = parse_hierarchy(kThreeLevel);
  const auto chain = h.spec_chain("SSC", "m");
  ASSERT_EQ(chain.size(), 2u);
  EXPECT_EQ(chain[0].first, "C");
  EXPECT_EQ(chain[1].first, "SSC");
  EXPECT_EQ(h.spec_chain("SSC", "n").size(), 1u);
  const Hierarchy only_sub = parse_hierarchy("class C { } class SC extends C { method m { } }");
  EXPECT_THROW(only_sub.spec_chain("C", "m"), Error);
}

TEST(Hierarchy, StructuralErrors) {
  EXPECT_THROW(parse_hierarchy("class SC extends Missing { }"), Error);
  try {
    parse_hierarchy("class SC extends Missing { }");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("unknown parent"), std::string::npos);
    EXPECT_EQ(e.line(), 1u);
  }
  EXPECT_THROW(parse_hierarchy("class A extends B { } class B extends A { }"), Error);
  EXPECT_THROW(parse_hierarchy("domain x: int[0..1]; class C { method m { pre: old(x) > 0; } }"), Error);
  EXPECT_THROW(parse_hierarchy("class C { invariant: y > 0; }"), Error);
}

TEST(Violations, StaticPreconditionViolationWithWitness) {
  const Hierarchy h = parse_hierarchy(kExampleOne);
  const auto vs = detect_hierarchy_violations(h, "m");
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ConstraintRole::Pre);
  EXPECT_EQ(vs[0].super, "C");
  EXPECT_EQ(vs[0].sub, "SC");
  ASSERT_TRUE(vs[0].witness.has_value());
  const Assignment& w = vs[0].witness->pre;
  EXPECT_TRUE(evaluate(parse_formula("x > 0"), w));
  EXPECT_FALSE(evaluate(parse_formula("x < 0"), w));
}

TEST(Violations, NonAdjacentPairUsesNearestDeclaringAncestor) {
  const Hierarchy h = parse_hierarchy(kThreeLevel);
  const auto vs = detect_hierarchy_violations(h, "m");
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ConstraintRole::Post);
  EXPECT_EQ(vs[0].super, "C");
  EXPECT_EQ(vs[0].sub, "SSC");
}

TEST(Violations, InvariantDirectionIsSubImpliesSuper) {
  const Hierarchy weaker = parse_hierarchy(
      "domain x: int[0..3]; class C { invariant: x > 1; method m { } } class SC extends C { invariant: x > 0; }");
  const auto vs = detect_hierarchy_violations(weaker, "m");
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ConstraintRole::Inv);
  const Hierarchy stronger = parse_hierarchy(
      "domain x: int[0..3]; class C { invariant: x > 0; method m { } } class SC extends C { invariant: x > 1; }");
  EXPECT_TRUE(detect_hierarchy_violations(stronger, "m").empty());
}

TEST(Violations, IdenticalOverridesAreClean) {
  const Hierarchy h = parse_hierarchy(R"(
domain x: int[-3..3];
class C { invariant: x != 0; method m { pre: x > 0; post: old(x > 0) -> x > 0; } }
class SC extends C { invariant: x != 0; method m { pre: x > 0; post: old(x > 0) -> x > 0; } }
class SSC extends SC { invariant: x != 0; method m { pre: x > 0; post: old(x > 0) -> x > 0; } }
)");
  EXPECT_TRUE(detect_hierarchy_violations(h, "m").empty());
}

TEST(Violations, AtStateTableTwoColumnTwo) {
  const Hierarchy h = symbolic_hierarchy(detail::builtin_chain(3), "m");
  Assignment st;
  for (const auto& name : h.domain().variables()) st.set(name, true);
  st.set("pre_C", false);
  st.set("pre_SC", true);
  st.set("pre_SSC", false);
  const auto vs = detect_hierarchy_violations(h, "m", st);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ConstraintRole::Pre);
  EXPECT_EQ(vs[0].super, "SC");
  EXPECT_EQ(vs[0].sub, "SSC");
}

TEST(Violations, UnknownMethod) {
  const Hierarchy h = parse_hierarchy(kExampleOne);
  EXPECT_THROW(detect_hierarchy_violations(h, "nope"), Error);
}
