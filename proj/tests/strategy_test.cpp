#include <gtest/gtest.h>

#include "bsv/dsl.hpp"
#include "bsv/parser.hpp"
#include "bsv/properties.hpp"
#include "bsv/strategy.hpp"

using namespace bsv;

namespace {

const char* kChain = R"(
domain x: int[-2..2];
domain y: int[-2..2];
class C { invariant: y >= -1; method m { pre: x > 0; post: y > 0; } }
class SC extends C { invariant: y <= 1; method m { pre: x < 0; post: y < 2; } }
class SSC extends SC { method m { pre: x == 0; post: old(y > 0) -> y > 0; } }
)";

Formula F(const char* s) { return parse_formula(s); }

}  // namespace

TEST(Percolation, PreconditionIsDisjunctionPostconditionIsConjunction) {
  const Hierarchy h = parse_hierarchy(kChain);
  const auto pre = effective_precondition(h, Strategy::Percolation, "SSC", "m");
  EXPECT_EQ(pre.aggregation, Aggregation::Disjunction);
  ASSERT_EQ(pre.parts.size(), 3u);
  EXPECT_TRUE(equivalent(pre.formula, F("x > 0 || x < 0 || x == 0"), h.domain()));
  EXPECT_TRUE(is_tautology(pre.formula, h.domain()));
  const auto post = effective_postcondition(h, Strategy::Percolation, "SC", "m");
  EXPECT_TRUE(equivalent(post.formula, F("y > 0 && y < 2"), h.domain()));
  EXPECT_EQ(post.parts[0].owner, "C");
  EXPECT_EQ(post.parts[1].owner, "SC");
}

TEST(Percolation, InvariantsConjoinAlongTheChain) {
  const Hierarchy h = parse_hierarchy(kChain);
  for (Strategy s : {Strategy::Percolation, Strategy::JoinComposition}) {
    const auto inv = effective_invariant(h, s, "SSC");
    EXPECT_TRUE(equivalent(inv.formula, F("y >= -1 && y <= 1 && true"), h.domain()));
    EXPECT_EQ(inv.parts.size(), 3u);
  }
}

TEST(JoinComposition, PostconditionsAreGuardedByOldPreconditions) {
  const Hierarchy h = parse_hierarchy(kChain);
  const auto post = effective_postcondition(h, Strategy::JoinComposition, "SSC", "m");
  EXPECT_TRUE(equivalent(post.formula,
                         F("(old(x > 0) -> y > 0) && (old(x < 0) -> y < 2) && (old(x == 0) -> (old(y > 0) -> y > 0))"),
                         h.domain()));
  const auto pre = effective_precondition(h, Strategy::JoinComposition, "SSC", "m");
  EXPECT_TRUE(equivalent(pre.formula, effective_precondition(h, Strategy::Percolation, "SSC", "m").formula, h.domain()));
}

TEST(JoinComposition, PercolationPostImpliesGuardedPost) {
  const Hierarchy h = parse_hierarchy(kChain);
  for (const auto& c : h.class_names()) {
    EXPECT_TRUE(implies(effective_postcondition(h, Strategy::Percolation, c, "m").formula,
                        effective_postcondition(h, Strategy::JoinComposition, c, "m").formula, h.domain()))
        << c;
  }
}

TEST(ClientConformance, ViewsCoverMethodVisibleSupers) {
  const Hierarchy h = parse_hierarchy(R"(
domain x: int[0..3];
class A { }
class C extends A { method m { pre: x > 0; } }
class SC extends C { }
class SSC extends SC { method m { pre: x > 1; } }
)");
  EXPECT_EQ(h.method_visible_supers("SSC", "m"), (std::vector<std::string>{"C", "SC", "SSC"}));
  const auto pre = effective_precondition(h, Strategy::ClientConformance, "SSC", "m");
  ASSERT_EQ(pre.parts.size(), 3u);
  EXPECT_EQ(pre.parts[1].view, "SC");
  EXPECT_EQ(pre.parts[1].owner, "C");
  EXPECT_EQ(pre.parts[2].owner, "SSC");
  // SC inherits pre_C; its view reads x > 0.
  CheckOptions as_sc;
  as_sc.client = "SC";
  EXPECT_TRUE(equivalent(pre.formula, F("x > 0 && x > 1"), h.domain(), as_sc));
}

// Under a one-hot client binding every foreign view is neutral, so the
// effective constraints reduce to the client's own contract plus the server's.
TEST(ClientConformance, OneHotBindingReducesToClientContract) {
  const Hierarchy h = parse_hierarchy(kChain);
  const Domain& d = h.domain();
  for (const auto& c : h.class_names()) {
    const auto con_pre = effective_precondition(h, Strategy::ClientConformance, c, "m").formula;
    const auto con_post = effective_postcondition(h, Strategy::ClientConformance, c, "m").formula;
    const MethodSpec& own = h.method_spec(c, "m");
    for (const auto& t : h.method_visible_supers(c, "m")) {
      const MethodSpec& client = h.method_spec(t, "m");
      CheckOptions co;
      co.client = t;
      EXPECT_TRUE(equivalent(con_pre, make_and({client.pre, own.pre}), d, co)) << t << " on " << c;
      EXPECT_TRUE(equivalent(con_post, make_implies(make_old(client.pre), client.post), d, co)) << t << " on " << c;
    }
  }
}

TEST(ClientConformance, FactoredFormulaMatchesDistributedParts) {
  const Hierarchy h = parse_hierarchy(kChain);
  const auto pre = effective_precondition(h, Strategy::ClientConformance, "SSC", "m");
  std::vector<Formula> parts;
  for (const auto& p : pre.parts) parts.push_back(p.formula);
  EXPECT_TRUE(equivalent(pre.formula, make_or(parts), h.domain()));
}

TEST(ClientConformance, InvariantGuardsUseExitPhaseOld) {
  const Hierarchy h = parse_hierarchy(kChain);
  EXPECT_THROW(effective_invariant(h, Strategy::ClientConformance, "SC"), Error);
  const auto entry = effective_invariant(h, Strategy::ClientConformance, "SC", std::string("m"), Phase::Entry);
  const auto exit = effective_invariant(h, Strategy::ClientConformance, "SC", std::string("m"), Phase::Exit);
  EXPECT_FALSE(entry.formula.contains_old());
  EXPECT_TRUE(exit.formula.contains_old());
  CheckOptions as_c;
  as_c.client = "C";
  EXPECT_TRUE(equivalent(entry.formula, F("x > 0 -> y >= -1"), h.domain(), as_c));
}

TEST(ClientConformance, StrategyImplicationChain) {
  for (const Hierarchy& h : detail::override_patterns(3)) {
    const Domain& d = h.domain();
    for (const auto& c : h.class_names()) {
      const Formula con_pre = effective_precondition(h, Strategy::ClientConformance, c, "m").formula;
      const Formula perc_pre = effective_precondition(h, Strategy::Percolation, c, "m").formula;
      EXPECT_TRUE(implies(con_pre, perc_pre, d)) << detail::pattern_name(h) << " " << c;
      const Formula g_post = effective_postcondition(h, Strategy::JoinComposition, c, "m").formula;
      const Formula con_post = effective_postcondition(h, Strategy::ClientConformance, c, "m").formula;
      EXPECT_TRUE(implies(g_post, con_post, d)) << detail::pattern_name(h) << " " << c;
    }
  }
}

TEST(Strategy, ParseAndPrintNames) {
  for (Strategy s : kAllStrategies) EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_FALSE(parse_strategy("eiffel").has_value());
}

TEST(Strategy, UnknownMethodThrows) {
  const Hierarchy h = parse_hierarchy(kChain);
  for (Strategy s : kAllStrategies) {
    EXPECT_THROW(effective_precondition(h, s, "SC", "n"), Error);
    EXPECT_THROW(effective_postcondition(h, s, "SC", "n"), Error);
  }
}
