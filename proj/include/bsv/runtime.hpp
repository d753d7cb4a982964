#ifndef BSV_RUNTIME_HPP
#define BSV_RUNTIME_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bsv/hierarchy.hpp"
#include "bsv/strategy.hpp"

namespace bsv {

/// Concrete pre- and post-state of the call.
struct StateMode {
  Assignment pre;
  Assignment post;
};

/// Direct truth values per class and role. One value stands for both the
/// entry and the exit state, so old(pre_X) reads the configured pre_X.
struct TruthMode {
  std::map<std::string, bool> pre;
  std::map<std::string, bool> post;
  std::map<std::string, bool> inv;  // classes left out default to true
};

/// One dispatched call cl_{client}.o_{receiver}.method.
struct CallScenario {
  std::string name;
  std::string client_static;
  std::string receiver_dynamic;
  std::string method;
  std::variant<StateMode, TruthMode> mode;
};

enum class Verdict { Pass, Fail, NotEvaluated };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotEvaluated: return "not-evaluated";
  }
  return "?";
}

inline Verdict verdict(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

enum class Anomaly { SurprisingExecution, UnsafeExecution, SurprisingFailure, ForeignObligation };

inline const char* to_string(Anomaly a) {
  switch (a) {
    case Anomaly::SurprisingExecution: return "surprising-execution";
    case Anomaly::UnsafeExecution: return "unsafe-execution";
    case Anomaly::SurprisingFailure: return "surprising-failure";
    case Anomaly::ForeignObligation: return "foreign-obligation";
  }
  return "?";
}

enum class Blame { None, Client, Server, Mixed };

inline const char* to_string(Blame b) {
  switch (b) {
    case Blame::None: return "none";
    case Blame::Client: return "client";
    case Blame::Server: return "server";
    case Blame::Mixed: return "mixed";
  }
  return "?";
}

/// A failed check traced back to the class whose assertion it is.
struct FailedPart {
  std::string owner;
  ConstraintRole role;
  std::optional<std::string> view;
  Phase phase;

  friend bool operator==(const FailedPart&, const FailedPart&) = default;
};

struct CallOutcome {
  Strategy strategy = Strategy::Percolation;
  std::string server_class;
  bool executed = false;
  Verdict eff_pre = Verdict::NotEvaluated;
  Verdict eff_post = Verdict::NotEvaluated;
  Verdict inv_entry = Verdict::NotEvaluated;
  Verdict inv_exit = Verdict::NotEvaluated;
  bool client_view_pre = false;
  bool client_view_post = false;
  bool server_own_pre = false;
  bool server_own_post = false;
  std::set<Anomaly> anomalies;
  Blame blame = Blame::None;
  std::vector<FailedPart> failing;

  bool has(Anomaly a) const { return anomalies.count(a) != 0; }
};

namespace detail {

inline std::vector<FailedPart> failed_parts(const EffectiveConstraint& ec, Phase phase, const Assignment& pre,
                                            const Assignment* post, const std::string& client) {
  std::vector<FailedPart> out;
  for (const auto& part : ec.parts) {
    // Parts guarded by another client's view are neutral under the one-hot binding.
    if (part.view && *part.view != client) continue;
    const bool ok = post ? evaluate(part.formula, pre, *post, client) : evaluate(part.formula, pre, client);
    if (ec.aggregation == Aggregation::Disjunction || !ok) {
      out.push_back({part.owner, part.role, part.view, phase});
    }
  }
  return out;
}

inline void validate_call(const Hierarchy& h, const CallScenario& sc) {
  if (!h.has_class(sc.client_static)) throw Error(ErrorKind::Lookup, "unknown client class '" + sc.client_static + "'");
  if (!h.has_class(sc.receiver_dynamic)) {
    throw Error(ErrorKind::Lookup, "unknown receiver class '" + sc.receiver_dynamic + "'");
  }
  if (!h.is_super_of(sc.client_static, sc.receiver_dynamic)) {
    throw Error(ErrorKind::Validation,
                "client type '" + sc.client_static + "' is not a superclass of receiver '" + sc.receiver_dynamic + "'");
  }
  if (!h.find_declaring(sc.client_static, sc.method)) {
    throw Error(ErrorKind::Lookup, "method '" + sc.method + "' unknown in client type '" + sc.client_static + "'");
  }
}

inline CallOutcome run_call(const Hierarchy& h, const CallScenario& sc, const Assignment& pre, const Assignment& post,
                            Strategy s) {
  validate_call(h, sc);
  const std::string& client = sc.client_static;
  CallOutcome out;
  out.strategy = s;
  out.server_class = h.resolve_method(sc.receiver_dynamic, sc.method);
  const std::string contract = h.resolve_method(client, sc.method);
  const MethodSpec& client_spec = h.get(contract).methods.at(sc.method);
  const MethodSpec& server_spec = h.get(out.server_class).methods.at(sc.method);

  out.client_view_pre = evaluate(client_spec.pre, pre);
  out.server_own_pre = evaluate(server_spec.pre, pre);
  out.client_view_post = evaluate(client_spec.post, pre, post);
  out.server_own_post = evaluate(server_spec.post, pre, post);

  const auto inv_in = effective_invariant(h, s, sc.receiver_dynamic, sc.method, Phase::Entry);
  const auto eff_pre = effective_precondition(h, s, sc.receiver_dynamic, sc.method);
  const bool inv_ok = evaluate(inv_in.formula, pre, client);
  const bool pre_ok = evaluate(eff_pre.formula, pre, client);
  out.inv_entry = verdict(inv_ok);
  out.eff_pre = verdict(pre_ok);
  out.executed = inv_ok && pre_ok;

  if (!inv_ok) {
    auto f = failed_parts(inv_in, Phase::Entry, pre, nullptr, client);
    out.failing.insert(out.failing.end(), f.begin(), f.end());
  }
  if (!pre_ok) {
    auto f = failed_parts(eff_pre, Phase::Entry, pre, nullptr, client);
    out.failing.insert(out.failing.end(), f.begin(), f.end());
  }
  if (!out.executed) {
    // A rejection the client's own contract does not explain points at the hierarchy.
    out.blame = (inv_ok && out.client_view_pre) ? Blame::Mixed : Blame::Client;
    return out;
  }

  const auto eff_post = effective_postcondition(h, s, sc.receiver_dynamic, sc.method);
  const auto inv_out = effective_invariant(h, s, sc.receiver_dynamic, sc.method, Phase::Exit);
  const bool post_ok = evaluate(eff_post.formula, pre, post, client);
  const bool inv_out_ok = evaluate(inv_out.formula, pre, post, client);
  out.eff_post = verdict(post_ok);
  out.inv_exit = verdict(inv_out_ok);

  std::vector<FailedPart> post_failures;
  if (!post_ok) post_failures = failed_parts(eff_post, Phase::Exit, pre, &post, client);
  out.failing.insert(out.failing.end(), post_failures.begin(), post_failures.end());
  if (!inv_out_ok) {
    auto f = failed_parts(inv_out, Phase::Exit, pre, &post, client);
    out.failing.insert(out.failing.end(), f.begin(), f.end());
  }

  if (!out.client_view_pre) out.anomalies.insert(Anomaly::SurprisingExecution);
  if (!out.server_own_pre) out.anomalies.insert(Anomaly::UnsafeExecution);
  if (!post_ok && out.client_view_post) out.anomalies.insert(Anomaly::SurprisingFailure);
  if (!post_ok && !post_failures.empty()) {
    bool all_foreign = true;
    for (const auto& f : post_failures) all_foreign = all_foreign && f.owner != contract;
    if (all_foreign) out.anomalies.insert(Anomaly::ForeignObligation);
  }
  out.blame = (post_ok && inv_out_ok) ? Blame::None : Blame::Server;
  return out;
}

inline std::string truth_atom(ConstraintRole role, const std::string& cls) {
  return std::string(to_string(role)) + "_" + cls;
}

}  // namespace detail

/// Replaces every assertion of `h` by a fresh boolean atom (pre_X, post_X
/// for each declaration of `m`, inv_X for each class).
inline Hierarchy symbolic_hierarchy(const Hierarchy& h, const std::string& m) {
  Domain d;
  std::vector<ClassDef> classes;
  for (const auto& name : h.class_names()) {
    const ClassDef& src = h.get(name);
    ClassDef c;
    c.name = name;
    c.parent = src.parent;
    d.declare_bool(detail::truth_atom(ConstraintRole::Inv, name));
    c.invariant = Formula::atom(detail::truth_atom(ConstraintRole::Inv, name));
    if (src.methods.count(m) != 0) {
      d.declare_bool(detail::truth_atom(ConstraintRole::Pre, name));
      d.declare_bool(detail::truth_atom(ConstraintRole::Post, name));
      c.methods[m] = MethodSpec{Formula::atom(detail::truth_atom(ConstraintRole::Pre, name)),
                                Formula::atom(detail::truth_atom(ConstraintRole::Post, name))};
    }
    classes.push_back(std::move(c));
  }
  return Hierarchy(std::move(d), std::move(classes));
}

namespace detail {

/// The single state standing for a truth configuration over symbolic_hierarchy(h, m).
inline Assignment truth_state(const Hierarchy& h, const CallScenario& sc, const TruthMode& truth) {
  for (const auto* table : {&truth.pre, &truth.post, &truth.inv}) {
    for (const auto& [cls, v] : *table) {
      if (!h.has_class(cls)) throw Error(ErrorKind::Lookup, "truth configuration names unknown class '" + cls + "'");
    }
  }
  Assignment state;
  for (const auto& name : h.class_names()) {
    auto inv = truth.inv.find(name);
    state.set(truth_atom(ConstraintRole::Inv, name), inv == truth.inv.end() || inv->second);
    if (!h.declares(name, sc.method)) continue;
    const bool in_chain = h.is_super_of(name, sc.receiver_dynamic);
    for (auto [role, table] : {std::pair{ConstraintRole::Pre, &truth.pre}, std::pair{ConstraintRole::Post, &truth.post}}) {
      auto it = table->find(name);
      if (it == table->end() && in_chain) {
        throw Error(ErrorKind::Validation, "truth configuration '" + sc.name + "' lacks " + to_string(role) + " " + name);
      }
      state.set(truth_atom(role, name), it != table->end() && it->second);
    }
  }
  return state;
}

}  // namespace detail

/// Runs the call pipeline on direct truth values: the hierarchy is made
/// symbolic and the configuration becomes a single state assignment.
inline CallOutcome classify_truth_config(const Hierarchy& h, const CallScenario& sc, Strategy s) {
  const auto* truth = std::get_if<TruthMode>(&sc.mode);
  if (truth == nullptr) throw Error(ErrorKind::Validation, "scenario '" + sc.name + "' is not a truth configuration");
  detail::validate_call(h, sc);
  const Assignment state = detail::truth_state(h, sc, *truth);
  return detail::run_call(symbolic_hierarchy(h, sc.method), sc, state, state, s);
}

/// Simulates one dispatched call under strategy `s`.
inline CallOutcome simulate_call(const Hierarchy& h, const CallScenario& sc, Strategy s) {
  if (std::holds_alternative<TruthMode>(sc.mode)) return classify_truth_config(h, sc, s);
  const auto& st = std::get<StateMode>(sc.mode);
  return detail::run_call(h, sc, st.pre, st.post, s);
}

inline std::map<Strategy, CallOutcome> compare_strategies(const Hierarchy& h, const CallScenario& sc) {
  std::map<Strategy, CallOutcome> out;
  for (Strategy s : kAllStrategies) out.emplace(s, simulate_call(h, sc, s));
  return out;
}

}  // namespace bsv

#endif  // BSV_RUNTIME_HPP
