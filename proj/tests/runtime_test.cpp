#include <gtest/gtest.h>

#include <string>

#include "bsv/dsl.hpp"
#include "bsv/runtime.hpp"
#include "bsv/tables.hpp"

#ifndef BSV_SCENARIO_DIR
#define BSV_SCENARIO_DIR "scenarios"
#endif

using namespace bsv;

namespace {

ScenarioFile example(const std::string& name) {
  return load_scenario_file(std::string(BSV_SCENARIO_DIR) + "/" + name);
}

CallOutcome run(const ScenarioFile& f, const std::string& scenario, Strategy s) {
  const CallScenario* sc = f.find(scenario);
  if (sc == nullptr) throw std::runtime_error("missing scenario " + scenario);
  return simulate_call(f.hierarchy, *sc, s);
}

CallScenario truth(const std::string& client, const std::string& receiver, std::map<std::string, bool> pre,
                   std::map<std::string, bool> post, std::map<std::string, bool> inv = {}) {
  return CallScenario{"t", client, receiver, "m", TruthMode{std::move(pre), std::move(post), std::move(inv)}};
}

}  // namespace

TEST(ExampleOne, PercolationExecutesSurprisinglyButSafely) {
  const auto f = example("example1.bsv");
  const auto perc = run(f, "c_client_on_sc", Strategy::Percolation);
  EXPECT_TRUE(perc.executed);
  EXPECT_EQ(perc.server_class, "SC");
  EXPECT_TRUE(perc.has(Anomaly::SurprisingExecution));
  EXPECT_FALSE(perc.has(Anomaly::UnsafeExecution));
  EXPECT_EQ(perc.blame, Blame::None);
  const auto con = run(f, "c_client_on_sc", Strategy::ClientConformance);
  EXPECT_FALSE(con.executed);
  EXPECT_TRUE(con.anomalies.empty());
  EXPECT_EQ(con.blame, Blame::Client);
  EXPECT_EQ(con.eff_post, Verdict::NotEvaluated);
  const auto own = run(f, "sc_client_on_sc", Strategy::ClientConformance);
  EXPECT_TRUE(own.executed);
  EXPECT_TRUE(own.anomalies.empty());
}

TEST(ExampleTwo, PercolationExecutesUnsafely) {
  const auto f = example("example2.bsv");
  const auto perc = run(f, "c_client_on_sc", Strategy::Percolation);
  EXPECT_TRUE(perc.executed);
  EXPECT_TRUE(perc.has(Anomaly::UnsafeExecution));
  EXPECT_FALSE(perc.has(Anomaly::SurprisingExecution));
  const auto con = run(f, "c_client_on_sc", Strategy::ClientConformance);
  EXPECT_FALSE(con.executed);
  EXPECT_EQ(con.blame, Blame::Mixed);
}

TEST(ExampleThree, ClientConformanceRejectsBothCalls) {
  const auto f = example("example3.bsv");
  for (const char* name : {"c_client", "sc_client"}) {
    EXPECT_FALSE(run(f, name, Strategy::ClientConformance).executed) << name;
    EXPECT_TRUE(run(f, name, Strategy::Percolation).executed) << name;
    EXPECT_TRUE(run(f, name, Strategy::JoinComposition).executed) << name;
  }
  EXPECT_TRUE(run(f, "c_client", Strategy::Percolation).has(Anomaly::UnsafeExecution));
  EXPECT_TRUE(run(f, "sc_client", Strategy::Percolation).has(Anomaly::SurprisingExecution));
  EXPECT_TRUE(run(f, "sc_client", Strategy::Percolation).has(Anomaly::UnsafeExecution));
  EXPECT_EQ(run(f, "c_client", Strategy::ClientConformance).blame, Blame::Mixed);
  EXPECT_EQ(run(f, "sc_client", Strategy::ClientConformance).blame, Blame::Client);
}

TEST(TruthMode, JoinCompositionForeignSurprisingFailure) {
  const Hierarchy h = detail::builtin_chain(2);
  const auto sc = truth("SC", "SC", {{"C", true}, {"SC", true}}, {{"C", false}, {"SC", true}});
  const auto join = classify_truth_config(h, sc, Strategy::JoinComposition);
  EXPECT_TRUE(join.executed);
  EXPECT_EQ(join.eff_post, Verdict::Fail);
  EXPECT_TRUE(join.has(Anomaly::SurprisingFailure));
  EXPECT_TRUE(join.has(Anomaly::ForeignObligation));
  EXPECT_EQ(join.blame, Blame::Server);
  ASSERT_EQ(join.failing.size(), 1u);
  EXPECT_EQ(join.failing[0].owner, "C");
  EXPECT_EQ(join.failing[0].phase, Phase::Exit);
  const auto con = classify_truth_config(h, sc, Strategy::ClientConformance);
  EXPECT_EQ(con.eff_post, Verdict::Pass);
  EXPECT_TRUE(con.anomalies.empty());
  EXPECT_EQ(con.blame, Blame::None);
}

TEST(TruthMode, OwnPostconditionFailureIsNotForeign) {
  const Hierarchy h = detail::builtin_chain(2);
  const auto sc = truth("C", "SC", {{"C", true}, {"SC", true}}, {{"C", false}, {"SC", true}});
  const auto con = classify_truth_config(h, sc, Strategy::ClientConformance);
  EXPECT_EQ(con.eff_post, Verdict::Fail);
  EXPECT_FALSE(con.has(Anomaly::SurprisingFailure));
  EXPECT_FALSE(con.has(Anomaly::ForeignObligation));
  EXPECT_EQ(con.blame, Blame::Server);
}

TEST(TruthMode, EntryInvariantFailureBlamesClient) {
  const Hierarchy h = detail::builtin_chain(2);
  const auto sc = truth("C", "SC", {{"C", true}, {"SC", true}}, {{"C", true}, {"SC", true}}, {{"SC", false}});
  for (Strategy s : {Strategy::Percolation, Strategy::JoinComposition}) {
    const auto o = classify_truth_config(h, sc, s);
    EXPECT_FALSE(o.executed);
    EXPECT_EQ(o.inv_entry, Verdict::Fail);
    EXPECT_EQ(o.blame, Blame::Client);
    ASSERT_FALSE(o.failing.empty());
    EXPECT_EQ(o.failing[0].owner, "SC");
    EXPECT_EQ(o.failing[0].role, ConstraintRole::Inv);
  }
}

TEST(TruthMode, ConfigurationErrors) {
  const Hierarchy h = detail::builtin_chain(3);
  EXPECT_THROW(classify_truth_config(h, truth("C", "SC", {{"C", true}}, {{"C", true}, {"SC", true}}),
                                     Strategy::Percolation),
               Error);
  EXPECT_THROW(classify_truth_config(h, truth("C", "SC", {{"C", true}, {"SC", true}, {"Q", true}},
                                           {{"C", true}, {"SC", true}}),
                                     Strategy::Percolation),
               Error);
  EXPECT_THROW(classify_truth_config(h, truth("SC", "C", {{"C", true}, {"SC", true}}, {{"C", true}, {"SC", true}}),
                                     Strategy::Percolation),
               Error);
  CallScenario st{"s", "C", "SC", "m", StateMode{}};
  EXPECT_THROW(classify_truth_config(h, st, Strategy::Percolation), Error);
}

TEST(StateMode, UnknownMethodAndClassesAreRejected) {
  const auto f = example("example1.bsv");
  CallScenario sc{"s", "C", "SC", "n", StateMode{{{"x", Value{std::int64_t{1}}}}, {{"x", Value{std::int64_t{1}}}}}};
  EXPECT_THROW(simulate_call(f.hierarchy, sc, Strategy::Percolation), Error);
  sc.method = "m";
  sc.client_static = "Z";
  EXPECT_THROW(simulate_call(f.hierarchy, sc, Strategy::Percolation), Error);
}

TEST(StateMode, ExitInvariantFailureBlamesServer) {
  const Hierarchy h = parse_hierarchy(R"(
domain x: int[0..3];
class C { invariant: x > 1; method dec { pre: x > 1; post: x < 2; } }
)");
  CallScenario sc{"s", "C", "C", "dec", StateMode{{{"x", Value{std::int64_t{2}}}}, {{"x", Value{std::int64_t{1}}}}}};
  for (Strategy s : kAllStrategies) {
    const auto o = simulate_call(h, sc, s);
    EXPECT_TRUE(o.executed);
    EXPECT_EQ(o.eff_post, Verdict::Pass);
    EXPECT_EQ(o.inv_exit, Verdict::Fail);
    EXPECT_EQ(o.blame, Blame::Server);
  }
}

// Percolation's precondition holds whenever client conformance's does.
TEST(Strategies, ClientConformancePreconditionIsNoWeakerThanPercolation) {
  const Hierarchy h = detail::builtin_chain(3);
  const Hierarchy sym = symbolic_hierarchy(h, "m");
  for (const auto& st : all_assignments(sym.domain(), sym.domain().variables())) {
    for (const auto& receiver : sym.class_names()) {
      for (const auto& client : sym.supers_of(receiver)) {
        CallScenario sc{"s", client, receiver, "m", StateMode{st, st}};
        const auto con = simulate_call(sym, sc, Strategy::ClientConformance);
        const auto perc = simulate_call(sym, sc, Strategy::Percolation);
        if (con.eff_pre == Verdict::Pass) EXPECT_EQ(perc.eff_pre, Verdict::Pass);
      }
    }
  }
}
