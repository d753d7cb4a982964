#ifndef BSV_REPORT_HPP
#define BSV_REPORT_HPP

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bsv/hierarchy.hpp"
#include "bsv/properties.hpp"
#include "bsv/runtime.hpp"
#include "bsv/tables.hpp"

namespace bsv {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "bsv-report/1";

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_digest(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct ScenarioResult {
  std::string name;
  std::string client;
  std::string receiver;
  std::string method;
  bool truth_mode = false;
  std::vector<CallOutcome> outcomes;  // one per requested strategy
};

struct MethodViolations {
  std::string method;
  std::vector<Violation> violations;
};

struct Report {
  std::string command;
  std::optional<std::string> input;
  std::optional<std::string> input_digest;
  std::vector<ScenarioResult> scenarios;
  std::vector<MethodViolations> violations;
  std::vector<PropertyResult> properties;
  std::vector<TableReport> tables;

  bool has_anomalies() const {
    for (const auto& s : scenarios) {
      for (const auto& o : s.outcomes) {
        if (!o.anomalies.empty()) return true;
      }
    }
    return false;
  }
  bool has_rejections() const {
    for (const auto& s : scenarios) {
      for (const auto& o : s.outcomes) {
        if (!o.executed) return true;
      }
    }
    return false;
  }
  bool has_violations() const {
    for (const auto& m : violations) {
      if (!m.violations.empty()) return true;
    }
    return false;
  }
  bool properties_pass() const {
    for (const auto& p : properties) {
      if (!p.passed) return false;
    }
    return true;
  }
};

namespace detail {

inline const char* yes_no(bool b) { return b ? "yes" : "no"; }

inline nlohmann::json verdict_json(Verdict v) {
  if (v == Verdict::NotEvaluated) return nullptr;
  return v == Verdict::Pass;
}

inline nlohmann::json assignment_json(const Assignment& a) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : a.values()) {
    if (const auto* b = std::get_if<bool>(&v)) j[k] = *b;
    else j[k] = std::get<std::int64_t>(v);
  }
  return j;
}

}  // namespace detail

inline nlohmann::json to_json(const CallOutcome& o) {
  nlohmann::json j;
  j["strategy"] = to_string(o.strategy);
  j["server"] = o.server_class;
  j["executed"] = o.executed;
  j["eff_pre"] = detail::verdict_json(o.eff_pre);
  j["eff_post"] = detail::verdict_json(o.eff_post);
  j["inv_entry"] = detail::verdict_json(o.inv_entry);
  j["inv_exit"] = detail::verdict_json(o.inv_exit);
  j["client_view_pre"] = o.client_view_pre;
  j["client_view_post"] = o.client_view_post;
  j["server_own_pre"] = o.server_own_pre;
  j["server_own_post"] = o.server_own_post;
  j["anomalies"] = nlohmann::json::array();
  for (Anomaly a : o.anomalies) j["anomalies"].push_back(to_string(a));
  j["blame"] = to_string(o.blame);
  j["failing"] = nlohmann::json::array();
  for (const auto& f : o.failing) {
    nlohmann::json p{{"owner", f.owner}, {"role", to_string(f.role)}, {"phase", f.phase == Phase::Entry ? "entry" : "exit"}};
    p["view"] = f.view ? nlohmann::json(*f.view) : nlohmann::json(nullptr);
    j["failing"].push_back(std::move(p));
  }
  return j;
}

inline nlohmann::json to_json(const Violation& v) {
  nlohmann::json j{{"kind", to_string(v.kind)}, {"super", v.super}, {"sub", v.sub}};
  if (v.witness) {
    nlohmann::json w{{"pre", detail::assignment_json(v.witness->pre)}};
    if (v.witness->post) w["post"] = detail::assignment_json(*v.witness->post);
    j["witness"] = std::move(w);
  }
  return j;
}

inline nlohmann::json to_json(const PropertyResult& p) {
  return {{"id", p.id},
          {"description", p.description},
          {"passed", p.passed},
          {"cases", p.cases},
          {"failures", p.failures},
          {"counterexamples", p.counterexamples}};
}

inline nlohmann::json to_json(const TableReport& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) rows.push_back({{"label", r.label}, {"cells", r.cells}});
  return {{"id", t.id}, {"title", t.title}, {"columns", t.columns}, {"rows", rows}, {"legend", t.legend}};
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["schema"] = kReportSchema;
  j["tool"] = {{"name", "bsv"}, {"version", kToolVersion}};
  j["command"] = r.command;
  j["input"] = r.input ? nlohmann::json(*r.input) : nlohmann::json(nullptr);
  j["input_digest"] = r.input_digest ? nlohmann::json("fnv1a64:" + *r.input_digest) : nlohmann::json(nullptr);
  j["scenarios"] = nlohmann::json::array();
  for (const auto& s : r.scenarios) {
    nlohmann::json sj{{"name", s.name},
                      {"client", s.client},
                      {"receiver", s.receiver},
                      {"method", s.method},
                      {"mode", s.truth_mode ? "truth" : "state"}};
    sj["outcomes"] = nlohmann::json::array();
    for (const auto& o : s.outcomes) sj["outcomes"].push_back(to_json(o));
    j["scenarios"].push_back(std::move(sj));
  }
  j["violations"] = nlohmann::json::array();
  for (const auto& m : r.violations) {
    for (const auto& v : m.violations) {
      nlohmann::json vj = to_json(v);
      vj["method"] = m.method;
      j["violations"].push_back(std::move(vj));
    }
  }
  j["properties"] = nlohmann::json::array();
  for (const auto& p : r.properties) j["properties"].push_back(to_json(p));
  j["tables"] = nlohmann::json::array();
  for (const auto& t : r.tables) j["tables"].push_back(to_json(t));
  return j;
}

inline std::string describe(const Violation& v) {
  std::string out = std::string(to_string(v.kind)) + " violation between " + v.super + " and " + v.sub;
  if (v.witness) out += " (witness " + to_string(*v.witness) + ")";
  return out;
}

inline std::string render_outcome(const CallOutcome& o) {
  std::string out = "  " + std::string(to_string(o.strategy)) + ": " + (o.executed ? "executed" : "rejected");
  out += " server=" + o.server_class;
  out += " pre=" + std::string(to_string(o.eff_pre)) + " post=" + to_string(o.eff_post);
  out += " inv-entry=" + std::string(to_string(o.inv_entry)) + " inv-exit=" + to_string(o.inv_exit);
  out += " blame=" + std::string(to_string(o.blame)) + "\n";
  out += "    client-view pre=" + std::string(detail::yes_no(o.client_view_pre)) +
         " post=" + detail::yes_no(o.client_view_post) + "; server-own pre=" + detail::yes_no(o.server_own_pre) +
         " post=" + detail::yes_no(o.server_own_post) + "\n";
  out += "    anomalies: ";
  if (o.anomalies.empty()) out += "none";
  bool first = true;
  for (Anomaly a : o.anomalies) {
    out += (first ? "" : ", ") + std::string(to_string(a));
    first = false;
  }
  out += "\n";
  if (!o.failing.empty()) {
    out += "    failing:";
    for (const auto& f : o.failing) {
      out += " " + std::string(to_string(f.role)) + "_" + f.owner;
      if (f.view) out += "[view " + *f.view + "]";
      out += f.phase == Phase::Entry ? "@entry" : "@exit";
    }
    out += "\n";
  }
  return out;
}

inline std::string render_text(const Report& r, bool glyphs = false) {
  std::string out;
  if (r.input) out += "input: " + *r.input + " (fnv1a64:" + r.input_digest.value_or("") + ")\n";
  for (const auto& m : r.violations) {
    out += "method " + m.method + ": ";
    if (m.violations.empty()) {
      out += "no hierarchy violations\n";
      continue;
    }
    out += std::to_string(m.violations.size()) + " hierarchy violation(s)\n";
    for (const auto& v : m.violations) out += "  " + describe(v) + "\n";
  }
  for (const auto& s : r.scenarios) {
    out += "scenario " + s.name + ": cl_" + s.client + ".o_" + s.receiver + "." + s.method +
           (s.truth_mode ? " (truth configuration)" : "") + "\n";
    for (const auto& o : s.outcomes) out += render_outcome(o);
  }
  for (const auto& p : r.properties) {
    out += std::string(p.passed ? "PASS" : "FAIL") + " " + p.id + ": " + p.description + " (" +
           std::to_string(p.cases) + " cases, " + std::to_string(p.failures) + " failures)\n";
    for (const auto& c : p.counterexamples) out += "  counterexample: " + c + "\n";
  }
  for (std::size_t i = 0; i < r.tables.size(); ++i) {
    if (i > 0) out += "\n";
    out += render_table(r.tables[i], glyphs);
  }
  return out;
}

}  // namespace bsv

#endif  // BSV_REPORT_HPP
