#ifndef BSV_TABLES_HPP
#define BSV_TABLES_HPP

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bsv/hierarchy.hpp"
#include "bsv/runtime.hpp"
#include "bsv/strategy.hpp"

namespace bsv {

struct TableRow {
  std::string label;
  std::vector<std::string> cells;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

/// A rendered configuration table. Cells hold truth values, call
/// classifications or reason codes; an empty cell is blank.
struct TableReport {
  int id = 0;
  std::string title;
  std::vector<std::string> columns;
  std::vector<TableRow> rows;
  std::vector<std::string> legend;

  const TableRow* row(const std::string& label) const {
    for (const auto& r : rows) {
      if (r.label == label) return &r;
    }
    return nullptr;
  }
};

inline const std::vector<int>& table_ids() {
  static const std::vector<int> kIds{2, 3, 4, 5, 6};
  return kIds;
}

/// Reason codes for the client-conformance tables.
namespace code {
inline constexpr const char* kAccept = "ACC";
inline constexpr const char* kReject = "REJ";
inline constexpr const char* kRejectSurprise = "REJ-SURPRISE";
inline constexpr const char* kRejectUnsafe = "REJ-UNSAFE";
inline constexpr const char* kAcceptSubFail = "ACC-SUBFAIL";
inline constexpr const char* kAcceptSupFail = "ACC-SUPFAIL";
inline constexpr const char* kSkip = "SKIP";
}  // namespace code

namespace detail {

inline const char* tf(bool b) { return b ? "true" : "false"; }

/// C <- SC <- SSC (or C <- SC), every class declaring `m`.
inline Hierarchy builtin_chain(std::size_t depth) {
  static const char* kNames[] = {"C", "SC", "SSC"};
  std::vector<ClassDef> classes;
  for (std::size_t i = 0; i < depth; ++i) {
    ClassDef c;
    c.name = kNames[i];
    if (i > 0) c.parent = kNames[i - 1];
    c.methods["m"] = MethodSpec{Formula::constant(true), Formula::constant(true)};
    classes.push_back(std::move(c));
  }
  return Hierarchy(Domain{}, std::move(classes));
}

inline CallScenario truth_call(const std::string& client, const std::string& receiver, std::map<std::string, bool> pre,
                               std::map<std::string, bool> post) {
  CallScenario sc;
  sc.name = "cl_" + client + ".o_" + receiver;
  sc.client_static = client;
  sc.receiver_dynamic = receiver;
  sc.method = "m";
  sc.mode = TruthMode{std::move(pre), std::move(post), {}};
  return sc;
}

inline std::map<std::string, bool> all_true(const Hierarchy& h) {
  std::map<std::string, bool> out;
  for (const auto& c : h.class_names()) out[c] = true;
  return out;
}

inline std::string join_strings(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

inline std::string anomaly_list(const CallOutcome& o) {
  std::vector<std::string> names;
  for (Anomaly a : o.anomalies) names.emplace_back(to_string(a));
  return names.empty() ? "none" : join_strings(names, ",");
}

inline std::string violation_marks(const std::vector<Violation>& vs) {
  std::vector<std::string> marks;
  for (const auto& v : vs) marks.push_back(std::string(to_string(v.kind)) + "(" + v.super + "," + v.sub + ")");
  return join_strings(marks, " ");
}

/// Reason code for the entry decision of a client-conforming call,
/// compared against precondition percolation.
inline std::string entry_code(const CallOutcome& con, const CallOutcome& perc) {
  if (con.executed) return code::kAccept;
  if (!perc.executed) return code::kReject;
  std::vector<std::string> why;
  if (perc.has(Anomaly::SurprisingExecution)) why.emplace_back(code::kRejectSurprise);
  if (perc.has(Anomaly::UnsafeExecution)) why.emplace_back(code::kRejectUnsafe);
  return why.empty() ? std::string(code::kReject) : join_strings(why, "+");
}

/// Reason code for the result decision of a client-conforming call,
/// compared against a reference strategy's outcome of the same call.
inline std::string exit_code(const Hierarchy& h, const CallScenario& sc, const CallOutcome& con,
                             const CallOutcome& ref) {
  if (!con.executed) return code::kSkip;
  const bool con_ok = con.eff_post == Verdict::Pass;
  const bool ref_ok = ref.eff_post == Verdict::Pass;
  if (!con_ok) return code::kReject;
  if (ref_ok) return code::kAccept;
  const std::string contract = h.resolve_method(sc.client_static, sc.method);
  bool all_sub = true;
  bool all_sup = true;
  for (const auto& f : ref.failing) {
    if (f.phase != Phase::Exit) continue;
    all_sub = all_sub && f.owner != contract && h.is_super_of(contract, f.owner);
    all_sup = all_sup && f.owner != contract && h.is_super_of(f.owner, contract);
  }
  if (all_sub) return code::kAcceptSubFail;
  if (all_sup) return code::kAcceptSupFail;
  return code::kAccept;
}

struct Column2 {
  bool c;
  bool sc;
};

// Column order shared by Tables 4-6: (true,true), (true,false), (false,true), (false,false).
inline const std::vector<Column2>& two_level_columns() {
  static const std::vector<Column2> kCols{{true, true}, {true, false}, {false, true}, {false, false}};
  return kCols;
}

inline TableReport table2() {
  const Hierarchy h = builtin_chain(3);
  const Hierarchy sym = symbolic_hierarchy(h, "m");
  struct Col {
    bool c, sc, ssc;
  };
  const std::vector<Col> cols{{false, false, true}, {false, true, false}, {true, false, false}, {false, false, false}};
  struct Problem {
    std::string label;
    std::size_t column;
    std::vector<std::pair<std::string, std::string>> calls;
  };
  const std::vector<Problem> problems{
      {"(P1)", 0, {{"SC", "SSC"}}}, {"(P2)", 1, {{"C", "SSC"}}}, {"(P3)", 2, {{"C", "SC"}}}};

  TableReport t;
  t.id = 2;
  t.title = "Example configurations for precondition percolation";
  t.columns = {"1", "2", "3", "4"};
  for (const char* label : {"pre_C", "pre_SC", "effPre_SC", "pre_SSC", "effPre_SSC", "violations"}) {
    t.rows.push_back({label, {}});
  }
  const auto eff_sc = effective_precondition(sym, Strategy::Percolation, "SC", "m").formula;
  const auto eff_ssc = effective_precondition(sym, Strategy::Percolation, "SSC", "m").formula;
  for (const auto& col : cols) {
    const CallScenario probe = truth_call("C", "SSC", {{"C", col.c}, {"SC", col.sc}, {"SSC", col.ssc}}, all_true(h));
    const Assignment st = truth_state(h, probe, std::get<TruthMode>(probe.mode));
    t.rows[0].cells.emplace_back(tf(col.c));
    t.rows[1].cells.emplace_back(tf(col.sc));
    t.rows[2].cells.emplace_back(tf(evaluate(eff_sc, st)));
    t.rows[3].cells.emplace_back(tf(col.ssc));
    t.rows[4].cells.emplace_back(tf(evaluate(eff_ssc, st)));
    t.rows[5].cells.push_back(violation_marks(detect_hierarchy_violations(sym, "m", st)));
  }
  for (const auto& p : problems) {
    TableRow row{p.label, std::vector<std::string>(cols.size())};
    const Col& col = cols[p.column];
    std::vector<std::string> entries;
    for (const auto& [client, receiver] : p.calls) {
      const CallScenario sc =
          truth_call(client, receiver, {{"C", col.c}, {"SC", col.sc}, {"SSC", col.ssc}}, all_true(h));
      const CallOutcome o = classify_truth_config(h, sc, Strategy::Percolation);
      entries.push_back(sc.name + " " + anomaly_list(o));
    }
    row.cells[p.column] = join_strings(entries, "; ");
    t.rows.push_back(std::move(row));
  }
  t.legend = {"violations: at-state method-level violations pre(T,S) where pre_T holds and pre_S does not",
              "(Pn): call executed under percolation with its anomaly tags"};
  return t;
}

inline TableReport table3() {
  const Hierarchy h = builtin_chain(3);
  const Hierarchy sym = symbolic_hierarchy(h, "m");
  struct Col {
    bool c, sc, ssc;
  };
  const std::vector<Col> cols{{false, true, true}, {true, false, false}, {true, true, false}, {true, true, true}};
  struct Problem {
    std::string label;
    std::size_t column;
    std::vector<std::pair<std::string, std::string>> calls;
  };
  const std::vector<Problem> problems{{"(P4)", 0, {{"SC", "SC"}}},
                                      {"(P5)", 1, {{"C", "SC"}}},
                                      {"(P6)", 2, {{"C", "SSC"}, {"SC", "SSC"}}}};

  TableReport t;
  t.id = 3;
  t.title = "Example configurations for postcondition percolation";
  t.columns = {"1", "2", "3", "4"};
  for (const char* label : {"post_C", "post_SC", "effPost_SC", "post_SSC", "effPost_SSC", "violations"}) {
    t.rows.push_back({label, {}});
  }
  const auto eff_sc = effective_postcondition(sym, Strategy::Percolation, "SC", "m").formula;
  const auto eff_ssc = effective_postcondition(sym, Strategy::Percolation, "SSC", "m").formula;
  for (const auto& col : cols) {
    const CallScenario probe = truth_call("C", "SSC", all_true(h), {{"C", col.c}, {"SC", col.sc}, {"SSC", col.ssc}});
    const Assignment st = truth_state(h, probe, std::get<TruthMode>(probe.mode));
    t.rows[0].cells.emplace_back(tf(col.c));
    t.rows[1].cells.emplace_back(tf(col.sc));
    t.rows[2].cells.emplace_back(tf(evaluate(eff_sc, st, st)));
    t.rows[3].cells.emplace_back(tf(col.ssc));
    t.rows[4].cells.emplace_back(tf(evaluate(eff_ssc, st, st)));
    t.rows[5].cells.push_back(violation_marks(detect_hierarchy_violations(sym, "m", st, st)));
  }
  for (const auto& p : problems) {
    TableRow row{p.label, std::vector<std::string>(cols.size())};
    const Col& col = cols[p.column];
    std::vector<std::string> entries;
    for (const auto& [client, receiver] : p.calls) {
      const CallScenario sc =
          truth_call(client, receiver, all_true(h), {{"C", col.c}, {"SC", col.sc}, {"SSC", col.ssc}});
      const CallOutcome o = classify_truth_config(h, sc, Strategy::Percolation);
      entries.push_back(sc.name + " " + anomaly_list(o));
    }
    row.cells[p.column] = join_strings(entries, "; ");
    t.rows.push_back(std::move(row));
  }
  t.legend = {"violations: at-state method-level violations post(T,S) where post_S holds and post_T does not",
              "(Pn): call executed under percolation with its anomaly tags"};
  return t;
}

inline TableReport table4() {
  const Hierarchy h = builtin_chain(2);
  TableReport t;
  t.id = 4;
  t.title = "Client conforming precondition percolation";
  t.columns = {"1", "2", "3", "4"};
  t.rows = {{"pre_C", {}}, {"pre_SC", {}}, {"cl_C.o_SC", {}}, {"cl_SC.o_SC", {}}};
  for (const auto& col : two_level_columns()) {
    t.rows[0].cells.emplace_back(tf(col.c));
    t.rows[1].cells.emplace_back(tf(col.sc));
    for (std::size_t k = 0; k < 2; ++k) {
      const CallScenario sc = truth_call(k == 0 ? "C" : "SC", "SC", {{"C", col.c}, {"SC", col.sc}}, all_true(h));
      t.rows[2 + k].cells.push_back(entry_code(classify_truth_config(h, sc, Strategy::ClientConformance),
                                               classify_truth_config(h, sc, Strategy::Percolation)));
    }
  }
  t.legend = {"ACC: accept call (same as in precondition percolation)",
              "REJ: reject call (same as in precondition percolation)",
              "REJ-SURPRISE: reject call (contrary to precondition percolation: surprising execution)",
              "REJ-UNSAFE: reject call (contrary to precondition percolation: unsafe execution)"};
  return t;
}

inline TableReport table5() {
  const Hierarchy h = builtin_chain(2);
  TableReport t;
  t.id = 5;
  t.title = "Client conforming postcondition percolation";
  t.columns = {"1", "2", "3", "4"};
  t.rows = {{"post_C", {}}, {"post_SC", {}}, {"cl_C.o_SC", {}}, {"cl_SC.o_SC", {}}};
  for (const auto& col : two_level_columns()) {
    t.rows[0].cells.emplace_back(tf(col.c));
    t.rows[1].cells.emplace_back(tf(col.sc));
    for (std::size_t k = 0; k < 2; ++k) {
      const CallScenario sc = truth_call(k == 0 ? "C" : "SC", "SC", all_true(h), {{"C", col.c}, {"SC", col.sc}});
      t.rows[2 + k].cells.push_back(exit_code(h, sc, classify_truth_config(h, sc, Strategy::ClientConformance),
                                              classify_truth_config(h, sc, Strategy::Percolation)));
    }
  }
  t.legend = {"ACC: accept result (same as in postcondition percolation)",
              "REJ: reject result (same as in postcondition percolation)",
              "ACC-SUBFAIL: accept result (contrary to postcondition percolation: subclass state failure)",
              "ACC-SUPFAIL: accept result (contrary to postcondition percolation: superclass state failure)"};
  return t;
}

inline TableReport table6() {
  const Hierarchy h = builtin_chain(2);
  TableReport t;
  t.id = 6;
  t.title = "Client conforming postcondition composition";
  t.columns = {"1", "2", "3", "4"};
  t.rows = {{"post_C", {}}, {"post_SC", {}}, {"cl_C.o_SC", {}}, {"cl_SC.o_SC", {}}};
  for (const auto& post : two_level_columns()) {
    t.rows[0].cells.emplace_back(tf(post.c));
    t.rows[1].cells.emplace_back(tf(post.sc));
    for (std::size_t k = 0; k < 2; ++k) {
      const CallScenario sc = truth_call(k == 0 ? "C" : "SC", "SC", all_true(h), {{"C", post.c}, {"SC", post.sc}});
      const CallOutcome o = classify_truth_config(h, sc, Strategy::ClientConformance);
      t.rows[2 + k].cells.emplace_back(o.executed && o.client_view_post ? code::kAccept : code::kReject);
    }
  }
  for (const auto& pre : two_level_columns()) {
    const std::string key = std::string("(") + tf(pre.c) + "," + tf(pre.sc) + ") ";
    TableRow rows[2] = {{key + "cl_C.o_SC", {}}, {key + "cl_SC.o_SC", {}}};
    TableRow pairs{key + "implications", {}};
    for (const auto& post : two_level_columns()) {
      bool any_executed = false;
      for (std::size_t k = 0; k < 2; ++k) {
        const CallScenario sc =
            truth_call(k == 0 ? "C" : "SC", "SC", {{"C", pre.c}, {"SC", pre.sc}}, {{"C", post.c}, {"SC", post.sc}});
        const CallOutcome con = classify_truth_config(h, sc, Strategy::ClientConformance);
        any_executed = any_executed || con.executed;
        rows[k].cells.push_back(exit_code(h, sc, con, classify_truth_config(h, sc, Strategy::JoinComposition)));
      }
      const auto imp = [](bool a, bool b) { return !a || b ? "t" : "f"; };
      pairs.cells.push_back(any_executed
                                ? std::string("(") + imp(pre.c, post.c) + "," + imp(pre.sc, post.sc) + ")"
                                : std::string("-"));
    }
    t.rows.push_back(std::move(rows[0]));
    t.rows.push_back(std::move(rows[1]));
    t.rows.push_back(std::move(pairs));
  }
  t.legend = {"upper rows (cl_X.o_SC): client accepts iff executed and its own postcondition holds",
              "(pre_C,pre_SC) rows: client-conforming result against g-effPost_SC = "
              "(pre_C -> post_C) && (pre_SC -> post_SC)",
              "ACC / REJ: same as for postcondition composition",
              "ACC-SUBFAIL / ACC-SUPFAIL: accepted contrary to postcondition composition",
              "SKIP: call rejected by the client-conforming precondition, no postcondition check",
              "implications: (pre_C -> post_C, pre_SC -> post_SC); '-' when both calls are rejected"};
  return t;
}

}  // namespace detail

inline TableReport generate_table(int id) {
  switch (id) {
    case 2: return detail::table2();
    case 3: return detail::table3();
    case 4: return detail::table4();
    case 5: return detail::table5();
    case 6: return detail::table6();
    default: throw Error(ErrorKind::Lookup, "unknown table id " + std::to_string(id) + " (expected 2..6)");
  }
}

/// Unicode glyph for a reason code, or the code itself.
inline std::string glyph_for(int table_id, const std::string& cell) {
  static const std::map<std::string, std::string> kCommon{
      {code::kAccept, "○"},         {code::kReject, "×"},        {code::kRejectSurprise, "⊗"},
      {code::kRejectUnsafe, "⊗"},   {code::kSkip, "-"},          {"REJ-SURPRISE+REJ-UNSAFE", "⊗ ⊗"},
      {code::kAcceptSubFail, "☑"}, {code::kAcceptSupFail, "√"},
  };
  if (table_id == 6 && (cell == code::kAcceptSubFail || cell == code::kAcceptSupFail)) return "✓";
  auto it = kCommon.find(cell);
  return it == kCommon.end() ? cell : it->second;
}

/// Fixed-width text rendering; byte-stable for a given table.
inline std::string render_table(const TableReport& t, bool glyphs = false) {
  std::vector<std::vector<std::string>> grid;
  grid.push_back({""});
  grid.back().insert(grid.back().end(), t.columns.begin(), t.columns.end());
  for (const auto& r : t.rows) {
    grid.push_back({r.label});
    for (const auto& c : r.cells) grid.back().push_back(glyphs && t.id >= 4 ? glyph_for(t.id, c) : c);
  }
  // Display width counts code points so glyph renderings line up.
  auto width = [](const std::string& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char ch) { return (ch & 0xC0) != 0x80; }));
  };
  std::vector<std::size_t> w;
  for (const auto& line : grid) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (w.size() <= i) w.push_back(0);
      w[i] = std::max(w[i], width(line[i]));
    }
  }
  std::string out = "Table " + std::to_string(t.id) + ": " + t.title + "\n";
  for (const auto& line : grid) {
    std::string text;
    for (std::size_t i = 0; i < line.size(); ++i) {
      text += line[i];
      if (i + 1 < line.size()) text += std::string(w[i] - width(line[i]) + 2, ' ');
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out += text + "\n";
  }
  for (const auto& l : t.legend) {
    const auto colon = l.find(": ");
    const bool keyed = glyphs && t.id >= 4 && colon != std::string::npos;
    out += "  " + (keyed ? glyph_for(t.id, l.substr(0, colon)) + l.substr(colon) : l) + "\n";
  }
  return out;
}

}  // namespace bsv

#endif  // BSV_TABLES_HPP
