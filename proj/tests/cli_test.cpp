#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bsv/cli.hpp"

#ifndef BSV_SCENARIO_DIR
#define BSV_SCENARIO_DIR "scenarios"
#endif

using namespace bsv;

namespace {

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bsv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string scenario(const char* name) { return std::string(BSV_SCENARIO_DIR) + "/" + name; }

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(Digest, Fnv1aReferenceVectors) {
  EXPECT_EQ(fnv1a_digest(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_digest("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_digest("foobar"), "85944171f73967e8");
}

TEST(Cli, CheckReportsViolationsWithStatusOne) {
  const CliRun r = cli({"check", scenario("example1.bsv")});
  EXPECT_EQ(r.status, kExitFindings);
  EXPECT_NE(r.out.find("pre violation between C and SC"), std::string::npos) << r.out;
}

TEST(Cli, CheckCleanFileIsOk) {
  const std::string path = temp_file("bsv_clean.bsv", "domain x: int[0..2];\nclass C { method m { pre: x > 0; } }\n"
                                                      "class SC extends C { method m { pre: true; post: x > 1 || x <= 1; } }\n");
  const CliRun r = cli({"check", path});
  EXPECT_EQ(r.status, kExitOk) << r.out;
  EXPECT_NE(r.out.find("no hierarchy violations"), std::string::npos);
}

TEST(Cli, SimulateStatusFollowsAnomalies) {
  EXPECT_EQ(cli({"simulate", scenario("example1.bsv")}).status, kExitFindings);
  EXPECT_EQ(cli({"simulate", scenario("example1.bsv"), "--strategy", "client"}).status, kExitOk);
  EXPECT_EQ(cli({"simulate", scenario("example1.bsv"), "--scenario", "sc_client_on_sc"}).status, kExitOk);
  EXPECT_EQ(cli({"simulate", scenario("example1.bsv"), "--scenario", "nope"}).status, kExitInputError);
  EXPECT_EQ(cli({"simulate", scenario("example1.bsv"), "--strategy", "eiffel"}).status, kExitInputError);
}

TEST(Cli, RejectIsErrorTurnsRejectionsIntoFindings) {
  std::string text = read_file(scenario("example1.bsv"));
  text += "\nconfig { strategy: client; reject_is_error: true; }\n";
  const std::string path = temp_file("bsv_reject.bsv", text);
  EXPECT_EQ(cli({"simulate", path}).status, kExitFindings);
  EXPECT_EQ(cli({"simulate", path, "--scenario", "sc_client_on_sc"}).status, kExitOk);
}

TEST(Cli, VerifyStatus) {
  EXPECT_EQ(cli({"verify", "--suite", "T1..T20"}).status, kExitOk);
  const CliRun bad = cli({"verify", "--suite", "theorem1-oracle"});
  EXPECT_EQ(bad.status, kExitPropertyFailure);
  EXPECT_NE(bad.out.find("FAIL theorem1-oracle"), std::string::npos);
  EXPECT_EQ(cli({"verify", "--suite", "T99"}).status, kExitInputError);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(cli({"check", "/nonexistent/file.bsv"}).status, kExitInputError);
  const std::string path = temp_file("bsv_bad.bsv", "class C { method m { pre: x > ; } }\n");
  const CliRun r = cli({"check", path});
  EXPECT_EQ(r.status, kExitInputError);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u);
  EXPECT_NE(r.err.find("1:"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"frobnicate"}).status, kExitInputError);
  EXPECT_EQ(cli({}).status, kExitInputError);
  EXPECT_EQ(cli({"tables", "--id", "9"}).status, kExitInputError);
  EXPECT_EQ(cli({"--max-assignments", "2", "check", scenario("example1.bsv")}).status, kExitInputError);
}

TEST(Cli, HelpAndVersionAreOk) {
  EXPECT_EQ(cli({"--help"}).status, kExitOk);
  const CliRun v = cli({"--version"});
  EXPECT_EQ(v.status, kExitOk);
  EXPECT_NE(v.out.find(kToolVersion), std::string::npos);
}

TEST(Cli, TablesText) {
  const CliRun r = cli({"tables", "--id", "4", "--id", "6"});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_EQ(count(r.out, "Table "), 2u);
  EXPECT_EQ(r.out, render_table(generate_table(4)) + "\n" + render_table(generate_table(6)));
}

TEST(Cli, JsonToStdoutMatchesTextVerdicts) {
  const CliRun text = cli({"simulate", scenario("example2.bsv")});
  const CliRun json = cli({"--json", "-", "simulate", scenario("example2.bsv")});
  EXPECT_EQ(text.status, json.status);
  const auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j.at("schema"), kReportSchema);
  EXPECT_EQ(j.at("command"), "simulate");
  EXPECT_EQ(j.at("input_digest"), "fnv1a64:" + fnv1a_digest(read_file(scenario("example2.bsv"))));
  std::size_t executed = 0;
  std::size_t rejected = 0;
  std::size_t anomalies = 0;
  for (const auto& s : j.at("scenarios")) {
    for (const auto& o : s.at("outcomes")) {
      (o.at("executed").get<bool>() ? executed : rejected)++;
      if (!o.at("anomalies").empty()) ++anomalies;
    }
  }
  EXPECT_EQ(count(text.out, ": executed "), executed);
  EXPECT_EQ(count(text.out, ": rejected "), rejected);
  EXPECT_EQ(count(text.out, "anomalies: ") - count(text.out, "anomalies: none"), anomalies);
  EXPECT_GT(anomalies, 0u);
}

TEST(Cli, JsonFileAlongsideText) {
  const auto path = (std::filesystem::temp_directory_path() / "bsv_report.json").string();
  std::remove(path.c_str());
  const CliRun r = cli({"--json", path, "verify", "--suite", "T1,T2"});
  EXPECT_EQ(r.status, kExitOk);
  EXPECT_NE(r.out.find("PASS T1"), std::string::npos);
  const auto j = nlohmann::json::parse(read_file(path));
  ASSERT_EQ(j.at("properties").size(), 2u);
  EXPECT_TRUE(j.at("properties")[0].at("passed").get<bool>());
  EXPECT_TRUE(j.at("input").is_null());
}

TEST(Cli, JsonCheckListsWitnesses) {
  const CliRun r = cli({"--json", "-", "check", scenario("example1.bsv")});
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.at("violations").size(), 1u);
  const auto& v = j.at("violations")[0];
  EXPECT_EQ(v.at("kind"), "pre");
  EXPECT_EQ(v.at("method"), "m");
  EXPECT_GT(v.at("witness").at("pre").at("x").get<int>(), 0);
}
