#ifndef BSV_PROPERTIES_HPP
#define BSV_PROPERTIES_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bsv/dsl.hpp"
#include "bsv/matcher.hpp"
#include "bsv/parser.hpp"
#include "bsv/runtime.hpp"
#include "bsv/strategy.hpp"
#include "bsv/tables.hpp"

namespace bsv {

struct VerifyOptions {
  std::uint64_t budget = kDefaultBudget;
  /// Size of the random hierarchy corpus.
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  /// Counterexamples kept per property (all failures are still counted).
  std::size_t max_counterexamples = 20;
};

struct PropertyResult {
  std::string id;
  std::string description;
  bool passed = true;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> counterexamples;  // sorted
};

/// The propositional facts T1..T20, written in the assertion grammar.
inline const std::vector<std::string>& table1_facts() {
  static const std::vector<std::string> kFacts{
      "A && B -> A",
      "A -> A || B",
      "true && A <-> A",
      "false || A <-> A",
      "(A -> true) <-> true",
      "(A -> false) <-> !A",
      "(true -> A) <-> A",
      "(false -> A) <-> true",
      "(A -> B) <-> !A || B",
      "(A -> B) <-> (!B -> !A)",
      "(A -> B) && (B -> C) -> (A -> C)",
      "A && (A -> B) <-> A && B",
      "A && (B -> A) <-> A",
      "(A && B -> C) <-> (A -> (B -> C))",
      "(A -> (B -> C)) <-> (B -> (A -> C))",
      "(A -> B) && (A -> C) <-> (A -> B && C)",
      "(A -> C) && (B -> C) <-> (A || B -> C)",
      "B -> (A -> B)",
      "(A -> C) -> (A && B -> C)",
      "(A -> C) && (B -> D) -> (A && B -> C && D)",
  };
  return kFacts;
}

inline std::vector<std::string> property_ids() {
  std::vector<std::string> ids;
  for (std::size_t i = 1; i <= table1_facts().size(); ++i) ids.push_back("T" + std::to_string(i));
  for (const char* id : {"worked-evaluations", "appendixA-a", "appendixA-b", "appendixA-c", "theorem1-oracle",
                         "theorem3", "lemma-view", "proposition1", "definition6"}) {
    ids.emplace_back(id);
  }
  return ids;
}

/// Expands a comma-separated suite list. Accepts property ids, `all`,
/// `table1` and ranges `Tm..Tn`.
inline std::vector<std::string> expand_suite(const std::string& spec) {
  const auto known = property_ids();
  std::vector<std::string> out;
  auto add = [&](const std::string& id) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw Error(ErrorKind::Lookup, "unknown property id '" + id + "'");
    }
    if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
  };
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t comma = spec.find(',', start);
    if (comma == std::string::npos) comma = spec.size();
    const std::string item = spec.substr(start, comma - start);
    start = comma + 1;
    if (item.empty()) continue;
    if (item == "all") {
      for (const auto& id : known) add(id);
    } else if (item == "table1") {
      for (std::size_t i = 1; i <= 20; ++i) add("T" + std::to_string(i));
    } else if (auto dots = item.find(".."); dots != std::string::npos && item[0] == 'T') {
      const std::string lo = item.substr(1, dots - 1);
      const std::string hi = item.substr(dots + 2 + (item.size() > dots + 2 && item[dots + 2] == 'T' ? 1 : 0));
      int a = 0;
      int b = 0;
      try {
        a = std::stoi(lo);
        b = std::stoi(hi);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Lookup, "malformed property range '" + item + "'");
      }
      if (a > b) throw Error(ErrorKind::Lookup, "empty property range '" + item + "'");
      for (int i = a; i <= b; ++i) add("T" + std::to_string(i));
    } else {
      add(item);
    }
  }
  return out;
}

namespace detail {

class ResultSink {
 public:
  ResultSink(std::string id, std::string description, std::size_t keep) : keep_(keep) {
    r_.id = std::move(id);
    r_.description = std::move(description);
  }

  void check(bool ok, const std::function<std::string()>& describe) {
    ++r_.cases;
    if (ok) return;
    ++r_.failures;
    if (all_.size() < keep_ * 4 + 16) all_.push_back(describe());
  }

  void count(std::uint64_t n) { r_.cases += n; }

  PropertyResult finish() {
    std::sort(all_.begin(), all_.end());
    if (all_.size() > keep_) all_.resize(keep_);
    r_.counterexamples = std::move(all_);
    r_.passed = r_.failures == 0;
    return std::move(r_);
  }

 private:
  PropertyResult r_;
  std::vector<std::string> all_;
  std::size_t keep_;
};

/// Every single-inheritance chain of depth 1..3 where the root declares
/// `m` and each subclass either overrides it or not.
inline std::vector<Hierarchy> override_patterns(std::size_t max_depth = 3) {
  static const char* kNames[] = {"C", "SC", "SSC"};
  std::vector<Hierarchy> out;
  for (std::size_t depth = 1; depth <= max_depth; ++depth) {
    for (std::uint32_t mask = 0; mask < (1U << (depth - 1)); ++mask) {
      std::vector<ClassDef> classes;
      for (std::size_t i = 0; i < depth; ++i) {
        ClassDef c;
        c.name = kNames[i];
        if (i > 0) c.parent = kNames[i - 1];
        if (i == 0 || ((mask >> (i - 1)) & 1U)) {
          c.methods["m"] = MethodSpec{Formula::constant(true), Formula::constant(true)};
        }
        classes.push_back(std::move(c));
      }
      out.push_back(symbolic_hierarchy(Hierarchy(Domain{}, std::move(classes)), "m"));
    }
  }
  return out;
}

inline std::string pattern_name(const Hierarchy& h) {
  std::string out;
  for (const auto& c : h.class_names()) {
    out += (out.empty() ? "" : "<-") + c + (h.declares(c, "m") ? "*" : "");
  }
  return out;
}

class FormulaGenerator {
 public:
  FormulaGenerator(std::vector<std::string> atoms, std::mt19937_64& rng) : atoms_(std::move(atoms)), rng_(rng) {}

  Formula make(int depth, bool allow_old) {
    if (depth == 0 || roll(3) == 0) return leaf(allow_old);
    switch (roll(5)) {
      case 0: return make_not(make(depth - 1, allow_old));
      case 1: return make_and({make(depth - 1, allow_old), make(depth - 1, allow_old)});
      case 2: return make_or({make(depth - 1, allow_old), make(depth - 1, allow_old)});
      case 3: return make_implies(make(depth - 1, allow_old), make(depth - 1, allow_old));
      default: return make_iff(make(depth - 1, allow_old), make(depth - 1, allow_old));
    }
  }

 private:
  Formula leaf(bool allow_old) {
    const auto r = roll(10);
    if (r == 0) return Formula::constant(roll(2) == 0);
    Formula a = Formula::atom(atoms_[roll(atoms_.size())]);
    if (allow_old && r <= 2) return make_old(a);
    return a;
  }

  std::size_t roll(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::vector<std::string> atoms_;
  std::mt19937_64& rng_;
};

}  // namespace detail

/// Deterministic corpus of depth-3 hierarchies C <- SC <- SSC over one to
/// three boolean atoms. C always declares `m`; SC and SSC override it with
/// probability 2/3 each. Invariants, pre- and postconditions are random
/// formulas (postconditions may read old atoms).
inline std::vector<Hierarchy> random_hierarchies(std::size_t count, std::uint64_t seed,
                                                 std::uint64_t budget = kDefaultBudget) {
  static const char* kNames[] = {"C", "SC", "SSC"};
  static const char* kAtoms[] = {"p", "q", "r"};
  std::mt19937_64 rng(seed);
  std::vector<Hierarchy> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::vector<std::string> atoms(kAtoms, kAtoms + k);
    Domain d = boolean_domain(atoms);
    d.set_budget(budget);
    detail::FormulaGenerator gen(atoms, rng);
    std::vector<ClassDef> classes;
    for (std::size_t i = 0; i < 3; ++i) {
      ClassDef c;
      c.name = kNames[i];
      if (i > 0) c.parent = kNames[i - 1];
      c.invariant = std::uniform_int_distribution<int>(0, 1)(rng) ? Formula::constant(true) : gen.make(2, false);
      if (i == 0 || std::uniform_int_distribution<int>(0, 2)(rng) != 0) {
        c.methods["m"] = MethodSpec{gen.make(2, false), gen.make(2, true)};
      }
      classes.push_back(std::move(c));
    }
    out.emplace_back(std::move(d), std::move(classes));
  }
  return out;
}

namespace detail {

inline Formula atom(ConstraintRole role, const std::string& cls) { return Formula::atom(truth_atom(role, cls)); }

inline std::string spec_text(const MethodSpec& s) { return "<" + to_string(s.pre) + ", " + to_string(s.post) + ">"; }

inline PropertyResult table1_fact(std::size_t index, const VerifyOptions& opts) {
  const std::string& text = table1_facts().at(index);
  ResultSink sink("T" + std::to_string(index + 1), text, opts.max_counterexamples);
  const Formula f = parse_formula(text);
  Domain d = boolean_domain({"A", "B", "C", "D"});
  d.set_budget(opts.budget);
  const auto cx = find_counterexample(f, d);
  sink.check(!cx, [&] { return "falsified by " + to_string(*cx); });
  return sink.finish();
}

inline PropertyResult worked_evaluations(const VerifyOptions& opts) {
  ResultSink sink("worked-evaluations",
                  "guarded and client-conforming postconditions of the P4 and P6 configurations",
                  opts.max_counterexamples);
  const Hierarchy h = symbolic_hierarchy(builtin_chain(3), "m");
  Domain d = h.domain();
  d.set_budget(opts.budget);
  auto fix = [](const Formula& f, bool c, bool sc, bool ssc) {
    return substitute(f, {{truth_atom(ConstraintRole::Post, "C"), Formula::constant(c)},
                          {truth_atom(ConstraintRole::Post, "SC"), Formula::constant(sc)},
                          {truth_atom(ConstraintRole::Post, "SSC"), Formula::constant(ssc)}});
  };
  auto expect = [&](const std::string& what, const Formula& got, const Formula& want, const CheckOptions& co) {
    sink.check(equivalent(got, want, d, co), [&] { return what + ": " + to_string(got) + " is not " + to_string(want); });
  };
  const Formula g_sc = effective_postcondition(h, Strategy::JoinComposition, "SC", "m").formula;
  const Formula g_ssc = effective_postcondition(h, Strategy::JoinComposition, "SSC", "m").formula;
  const Formula con_sc = effective_postcondition(h, Strategy::ClientConformance, "SC", "m").formula;
  const Formula con_ssc = effective_postcondition(h, Strategy::ClientConformance, "SSC", "m").formula;

  // P4: post_C = false, post_SC = true.
  expect("P4 g-effPost_SC", fix(g_sc, false, true, true), make_not(make_old(atom(ConstraintRole::Pre, "C"))), {});
  CheckOptions as_sc;
  as_sc.client = "SC";
  expect("P4 effConPost_SC for cl_SC", fix(con_sc, false, true, true), Formula::constant(true), as_sc);
  // P6 (Table 3 column 3): post_C = post_SC = true, post_SSC = false.
  expect("P6 g-effPost_SSC", fix(g_ssc, true, true, false), make_not(make_old(atom(ConstraintRole::Pre, "SSC"))),
         {});
  for (const char* client : {"C", "SC"}) {
    CheckOptions co;
    co.client = client;
    expect(std::string("P6 effConPost_SSC for cl_") + client, fix(con_ssc, true, true, false),
           Formula::constant(true), co);
  }
  return sink.finish();
}

inline PropertyResult appendix_a_a(const VerifyOptions& opts) {
  ResultSink sink("appendixA-a", "percolation bounds: effPre is the disjunction, effPost the conjunction",
                  opts.max_counterexamples);
  for (const Hierarchy& h : override_patterns()) {
    Domain d = h.domain();
    d.set_budget(opts.budget);
    const std::string name = pattern_name(h);
    for (const auto& c : h.class_names()) {
      const Formula pre = effective_precondition(h, Strategy::Percolation, c, "m").formula;
      const Formula post = effective_postcondition(h, Strategy::Percolation, c, "m").formula;
      std::vector<Formula> pres;
      std::vector<Formula> posts;
      for (const auto& [owner, spec] : h.spec_chain(c, "m")) {
        pres.push_back(spec.pre);
        posts.push_back(spec.post);
        sink.check(implies(spec.pre, pre, d), [&] { return name + ": pre_" + owner + " does not imply effPre_" + c; });
        sink.check(implies(post, spec.post, d),
                   [&] { return name + ": effPost_" + c + " does not imply post_" + owner; });
      }
      sink.check(equivalent(pre, make_or(pres), d), [&] { return name + ": effPre_" + c + " is not the disjunction"; });
      sink.check(equivalent(post, make_and(posts), d),
                 [&] { return name + ": effPost_" + c + " is not the conjunction"; });
      if (const auto& parent = h.get(c).parent) {
        const Formula ppre = effective_precondition(h, Strategy::Percolation, *parent, "m").formula;
        const Formula ppost = effective_postcondition(h, Strategy::Percolation, *parent, "m").formula;
        sink.check(implies(ppre, pre, d), [&] { return name + ": effPre_" + *parent + " -> effPre_" + c + " fails"; });
        sink.check(implies(post, ppost, d),
                   [&] { return name + ": effPost_" + c + " -> effPost_" + *parent + " fails"; });
      }
    }
  }
  return sink.finish();
}

inline PropertyResult appendix_a_b(const VerifyOptions& opts) {
  ResultSink sink("appendixA-b", "join is the least upper bound in the refinement ordering", opts.max_counterexamples);
  JoinLubOptions full;
  full.atoms = 1;
  const JoinLubReport r1 = verify_join_lub(full);
  JoinLubOptions sampled;
  sampled.atoms = 2;
  sampled.pair_samples = 300;
  sampled.third_samples = 40;
  sampled.seed = opts.seed;
  const JoinLubReport r2 = verify_join_lub(sampled);
  for (const auto* r : {&r1, &r2}) {
    sink.count(r->pairs + r->triples - r->counterexamples.size());
    for (const auto& cx : r->counterexamples) sink.check(false, [&] { return cx; });
  }
  return sink.finish();
}

inline PropertyResult appendix_a_c(const VerifyOptions& opts) {
  ResultSink sink("appendixA-c", "effConPre -> effPre and effPost -> g-effPost -> effConPost",
                  opts.max_counterexamples);
  for (const Hierarchy& h : override_patterns()) {
    Domain d = h.domain();
    d.set_budget(opts.budget);
    const std::string name = pattern_name(h);
    for (const auto& c : h.class_names()) {
      const Formula con_pre = effective_precondition(h, Strategy::ClientConformance, c, "m").formula;
      const Formula pre = effective_precondition(h, Strategy::Percolation, c, "m").formula;
      const Formula post = effective_postcondition(h, Strategy::Percolation, c, "m").formula;
      const Formula g_post = effective_postcondition(h, Strategy::JoinComposition, c, "m").formula;
      const Formula con_post = effective_postcondition(h, Strategy::ClientConformance, c, "m").formula;
      sink.check(implies(con_pre, pre, d), [&] { return name + " at " + c + ": effConPre -> effPre fails"; });
      sink.check(implies(post, g_post, d), [&] { return name + " at " + c + ": effPost -> g-effPost fails"; });
      sink.check(implies(g_post, con_post, d), [&] { return name + " at " + c + ": g-effPost -> effConPost fails"; });
    }
  }
  return sink.finish();
}

inline PropertyResult theorem1_oracle(const VerifyOptions& opts) {
  ResultSink sink("theorem1-oracle", "syntactic refinement agrees with the implementation-relation oracle",
                  opts.max_counterexamples);
  Domain d = boolean_domain({"A"});
  d.set_budget(opts.budget);
  const auto specs = truth_function_specs({"A"});
  for (const auto& sub : specs) {
    for (const auto& sup : specs) {
      const SpecPair p{sub, sup, d};
      const bool syn = refines(p);
      const bool sem = refines_semantic(p);
      sink.check(syn == sem, [&] {
        return spec_text(sub) + " vs " + spec_text(sup) + ": refines=" + (syn ? "true" : "false") +
               " semantic=" + (sem ? "true" : "false");
      });
    }
  }
  return sink.finish();
}

inline PropertyResult theorem3(const std::vector<Hierarchy>& corpus, const VerifyOptions& opts) {
  ResultSink sink("theorem3", "specification inheritance yields strong behavioral subtypes",
                  opts.max_counterexamples);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Hierarchy& h = corpus[i];
    for (const auto& s : h.class_names()) {
      for (const auto& t : h.supers_of(s)) {
        sink.check(strong_behavioral_subtype(h, s, t, SpecLevel::Effective),
                   [&] { return "hierarchy " + std::to_string(i) + ": " + s + " vs " + t + "\n" + serialize(h); });
      }
    }
  }
  return sink.finish();
}

inline PropertyResult lemma_view(const std::vector<Hierarchy>& corpus, const VerifyOptions& opts) {
  ResultSink sink("lemma-view", "effView_T -> effView_S for every superclass T of S", opts.max_counterexamples);
  auto run = [&](const Hierarchy& h, const std::string& name) {
    for (const auto& s : h.class_names()) {
      for (const auto& t : h.method_visible_supers(s, "m")) {
        sink.check(implies(effective_view(h, t, "m"), effective_view(h, s, "m"), h.domain()),
                   [&] { return name + ": effView_" + t + " -> effView_" + s + " fails"; });
      }
    }
  };
  for (const Hierarchy& h : override_patterns()) run(h, pattern_name(h));
  for (std::size_t i = 0; i < corpus.size(); ++i) run(corpus[i], "hierarchy " + std::to_string(i));
  return sink.finish();
}

inline PropertyResult proposition1(const std::vector<Hierarchy>& corpus, const VerifyOptions& opts) {
  ResultSink sink("proposition1", "client-conforming specs refine safely under the server precondition",
                  opts.max_counterexamples);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Hierarchy& h = corpus[i];
    for (const auto& s : h.class_names()) {
      for (const auto& t : h.method_visible_supers(s, "m")) {
        sink.check(check_safe_refinement(h, s, t, "m"),
                   [&] { return "hierarchy " + std::to_string(i) + ": " + s + " vs " + t + "\n" + serialize(h); });
      }
    }
  }
  return sink.finish();
}

inline PropertyResult definition6(const VerifyOptions& opts) {
  ResultSink sink("definition6", "client conformance never executes surprisingly or unsafely",
                  opts.max_counterexamples);
  for (const Hierarchy& h : override_patterns()) {
    const std::string name = pattern_name(h);
    Domain d = h.domain();
    d.set_budget(opts.budget);
    const auto states = all_assignments(d, d.variables());
    for (const auto& receiver : h.class_names()) {
      for (const auto& client : h.method_visible_supers(receiver, "m")) {
        CallScenario sc;
        sc.client_static = client;
        sc.receiver_dynamic = receiver;
        sc.method = "m";
        const std::string contract = h.resolve_method(client, "m");
        for (const auto& st : states) {
          const CallOutcome o = run_call(h, sc, st, st, Strategy::ClientConformance);
          bool foreign_failure = false;
          if (o.has(Anomaly::SurprisingFailure)) {
            for (const auto& f : o.failing) foreign_failure = foreign_failure || f.owner != contract;
          }
          const bool ok = !o.has(Anomaly::SurprisingExecution) && !o.has(Anomaly::UnsafeExecution) && !foreign_failure;
          sink.check(ok, [&] { return name + " cl_" + client + ".o_" + receiver + " at " + to_string(st); });
        }
      }
    }
  }
  return sink.finish();
}

}  // namespace detail

/// Runs the named property checks in the order given.
inline std::vector<PropertyResult> verify_properties(const std::vector<std::string>& ids,
                                                     const VerifyOptions& opts = {}) {
  std::vector<Hierarchy> corpus;
  auto need_corpus = [&]() -> const std::vector<Hierarchy>& {
    if (corpus.empty() && opts.samples > 0) corpus = random_hierarchies(opts.samples, opts.seed, opts.budget);
    return corpus;
  };
  const auto known = property_ids();
  std::vector<PropertyResult> out;
  for (const auto& id : ids) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw Error(ErrorKind::Lookup, "unknown property id '" + id + "'");
    }
    if (id[0] == 'T') {
      out.push_back(detail::table1_fact(static_cast<std::size_t>(std::stoi(id.substr(1)) - 1), opts));
    } else if (id == "worked-evaluations") {
      out.push_back(detail::worked_evaluations(opts));
    } else if (id == "appendixA-a") {
      out.push_back(detail::appendix_a_a(opts));
    } else if (id == "appendixA-b") {
      out.push_back(detail::appendix_a_b(opts));
    } else if (id == "appendixA-c") {
      out.push_back(detail::appendix_a_c(opts));
    } else if (id == "theorem1-oracle") {
      out.push_back(detail::theorem1_oracle(opts));
    } else if (id == "theorem3") {
      out.push_back(detail::theorem3(need_corpus(), opts));
    } else if (id == "lemma-view") {
      out.push_back(detail::lemma_view(need_corpus(), opts));
    } else if (id == "proposition1") {
      out.push_back(detail::proposition1(need_corpus(), opts));
    } else if (id == "definition6") {
      out.push_back(detail::definition6(opts));
    }
  }
  return out;
}

}  // namespace bsv

#endif  // BSV_PROPERTIES_HPP
