#ifndef BSV_CLI_HPP
#define BSV_CLI_HPP

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bsv/dsl.hpp"
#include "bsv/properties.hpp"
#include "bsv/report.hpp"
#include "bsv/runtime.hpp"
#include "bsv/tables.hpp"

namespace bsv {

/// Process exit statuses; each outcome class has its own value.
enum ExitStatus : int {
  kExitOk = 0,
  kExitFindings = 1,         // anomalies, hierarchy violations, or rejections flagged as errors
  kExitPropertyFailure = 2,  // a verified property has counterexamples
  kExitInputError = 3,       // unreadable, malformed or invalid input; unknown ids; budget exceeded
};

namespace detail {

struct CliState {
  std::string json_path;
  std::optional<std::uint64_t> max_assignments;
  std::string file;
  std::vector<std::string> scenario_names;
  std::string strategy;
  std::vector<int> table_ids;
  bool glyphs = false;
  std::string suite = "all";
  std::optional<std::uint64_t> budget;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
};

inline Report load_for(const std::string& command, const CliState& st, ScenarioFile& parsed) {
  const std::string text = read_file(st.file);
  parsed = parse_scenario_file(text);
  if (st.max_assignments) parsed.hierarchy.set_budget(*st.max_assignments);
  Report r;
  r.command = command;
  r.input = st.file;
  r.input_digest = fnv1a_digest(text);
  return r;
}

inline int run_check(const CliState& st, Report& r) {
  ScenarioFile f;
  r = load_for("check", st, f);
  for (const auto& m : f.hierarchy.method_names()) {
    r.violations.push_back({m, detect_hierarchy_violations(f.hierarchy, m)});
  }
  return r.has_violations() ? kExitFindings : kExitOk;
}

inline int run_simulate(const CliState& st, Report& r) {
  ScenarioFile f;
  r = load_for("simulate", st, f);
  std::vector<Strategy> strategies = f.config.strategies;
  if (!st.strategy.empty() && st.strategy != "all") {
    auto s = parse_strategy(st.strategy);
    if (!s) throw Error(ErrorKind::Lookup, "unknown strategy '" + st.strategy + "'");
    strategies = {*s};
  } else if (st.strategy == "all") {
    strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
  }
  for (const auto& name : st.scenario_names) {
    if (f.find(name) == nullptr) throw Error(ErrorKind::Lookup, "no scenario named '" + name + "'");
  }
  for (const auto& sc : f.scenarios) {
    if (!st.scenario_names.empty() &&
        std::find(st.scenario_names.begin(), st.scenario_names.end(), sc.name) == st.scenario_names.end()) {
      continue;
    }
    ScenarioResult res{sc.name, sc.client_static, sc.receiver_dynamic, sc.method,
                       std::holds_alternative<TruthMode>(sc.mode), {}};
    for (Strategy s : strategies) res.outcomes.push_back(simulate_call(f.hierarchy, sc, s));
    r.scenarios.push_back(std::move(res));
  }
  const bool failing = r.has_anomalies() || (f.config.reject_is_error && r.has_rejections());
  return failing ? kExitFindings : kExitOk;
}

inline int run_tables(const CliState& st, Report& r) {
  r.command = "tables";
  const std::vector<int>& ids = st.table_ids.empty() ? table_ids() : st.table_ids;
  for (int id : ids) r.tables.push_back(generate_table(id));
  return kExitOk;
}

inline int run_verify(const CliState& st, Report& r) {
  r.command = "verify";
  VerifyOptions opts;
  if (st.max_assignments) opts.budget = *st.max_assignments;
  if (st.budget) opts.budget = *st.budget;
  opts.samples = st.samples;
  opts.seed = st.seed;
  r.properties = verify_properties(expand_suite(st.suite), opts);
  return r.properties_pass() ? kExitOk : kExitPropertyFailure;
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  detail::CliState st;
  CLI::App app{"Behavioral subtyping and contract strategy checker", "bsv"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--json", st.json_path, "Write the JSON report to PATH ('-' for standard output)");
  app.add_option("--max-assignments", st.max_assignments, "Enumeration budget for tautology checks")
      ->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "Parse, validate and report static hierarchy violations");
  check->add_option("file", st.file, "Scenario file (.bsv)")->required();

  auto* simulate = app.add_subcommand("simulate", "Simulate the scenarios of a file");
  simulate->add_option("file", st.file, "Scenario file (.bsv)")->required();
  simulate->add_option("--scenario", st.scenario_names, "Only run the named scenario (repeatable)");
  simulate->add_option("--strategy", st.strategy, "percolation, join, client or all")
      ->check(CLI::IsMember({"percolation", "join", "client", "all"}));

  auto* tables = app.add_subcommand("tables", "Print the configuration tables 2-6");
  tables->add_option("--id", st.table_ids, "Table id (repeatable)")->check(CLI::Range(2, 6));
  tables->add_flag("--glyphs", st.glyphs, "Render reason codes as glyphs");

  auto* verify = app.add_subcommand("verify", "Run property checks");
  verify->add_option("--suite", st.suite, "Comma-separated property ids, ranges like T1..T20, or all");
  verify->add_option("--budget", st.budget, "Enumeration budget")->check(CLI::PositiveNumber);
  verify->add_option("--samples", st.samples, "Random hierarchies for corpus-based properties");
  verify->add_option("--seed", st.seed, "Seed for the random hierarchy corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  Report report;
  int status = kExitOk;
  try {
    if (*check) status = detail::run_check(st, report);
    else if (*simulate) status = detail::run_simulate(st, report);
    else if (*tables) status = detail::run_tables(st, report);
    else status = detail::run_verify(st, report);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  if (st.json_path == "-") {
    out << to_json(report).dump(2) << "\n";
  } else {
    out << render_text(report, st.glyphs);
    if (!st.json_path.empty()) {
      std::ofstream f(st.json_path, std::ios::binary);
      if (!f) {
        err << "error: cannot write '" << st.json_path << "'\n";
        return kExitInputError;
      }
      f << to_json(report).dump(2) << "\n";
    }
  }
  return status;
}

}  // namespace bsv

#endif  // BSV_CLI_HPP
