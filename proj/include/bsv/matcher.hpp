#ifndef BSV_MATCHER_HPP
#define BSV_MATCHER_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bsv/hierarchy.hpp"
#include "bsv/strategy.hpp"
#include "bsv/tautology.hpp"

namespace bsv {

/// Subtype spec and supertype spec of the same method over one domain.
struct SpecPair {
  MethodSpec sub;
  MethodSpec sup;
  Domain domain;
};

/// Plug-in match: (pre_sup -> pre_sub) && (post_sub -> post_sup).
inline bool match_plug_in(const SpecPair& p) {
  return implies(p.sup.pre, p.sub.pre, p.domain) && implies(p.sub.post, p.sup.post, p.domain);
}

/// Relaxed plug-in match: (pre_sup -> pre_sub) && (old(pre_sup) && post_sub -> post_sup).
inline bool match_relaxed_plug_in(const SpecPair& p) {
  return implies(p.sup.pre, p.sub.pre, p.domain) &&
         is_tautology(make_implies(make_and({make_old(p.sup.pre), p.sub.post}), p.sup.post), p.domain);
}

/// Syntactic refinement sub ⊒ sup: (1) pre_sup -> pre_sub and
/// (2) old(pre_sup) -> (post_sub -> post_sup), both as two-state tautologies.
inline bool refines(const SpecPair& p, const CheckOptions& opts = {}) {
  return implies(p.sup.pre, p.sub.pre, p.domain, opts) &&
         is_tautology(make_implies(make_old(p.sup.pre), make_implies(p.sub.post, p.sup.post)), p.domain, opts);
}

inline bool refines(const MethodSpec& sub, const MethodSpec& sup, const Domain& d, const CheckOptions& opts = {}) {
  return refines(SpecPair{sub, sup, d}, opts);
}

/// Finite implementation model: a relation over a small state space, stored
/// as a bit matrix (bit i*n+j set iff state j is a possible outcome from i).
struct ImplementationRelation {
  std::vector<Assignment> states;
  std::uint64_t bits = 0;

  bool related(std::size_t from, std::size_t to) const {
    return (bits >> (from * states.size() + to)) & 1U;
  }
};

/// Total correctness: every pre-state satisfying `pre` has at least one
/// outcome, and every outcome from such a state satisfies `post`. States
/// violating `pre` are unconstrained.
inline bool satisfies(const ImplementationRelation& r, const MethodSpec& spec) {
  const std::size_t n = r.states.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!evaluate(spec.pre, r.states[i])) continue;
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (!r.related(i, j)) continue;
      any = true;
      if (!evaluate(spec.post, r.states[i], r.states[j])) return false;
    }
    if (!any) return false;
  }
  return true;
}

inline constexpr std::size_t kDefaultSemanticStateCap = 4;

/// Semantic refinement oracle: every implementation relation satisfying
/// the subtype spec also satisfies the supertype spec. Enumerates all
/// 2^(n*n) relations over the n states spanned by the variables the four
/// formulas mention; n must not exceed `state_cap`.
inline bool refines_semantic(const SpecPair& p, std::size_t state_cap = kDefaultSemanticStateCap) {
  for (const Formula* f : {&p.sub.pre, &p.sub.post, &p.sup.pre, &p.sup.post}) {
    validate(*f, p.domain, FormulaRole::General);
    if (f->contains_client()) {
      throw Error(ErrorKind::Validation, "semantic refinement is defined for client-free specifications");
    }
  }
  std::set<std::string> vars;
  for (const Formula* f : {&p.sub.pre, &p.sub.post, &p.sup.pre, &p.sup.post}) {
    const auto used = variables_of(*f).all();
    vars.insert(used.begin(), used.end());
  }
  const std::vector<std::string> names(vars.begin(), vars.end());
  const std::uint64_t n = AssignmentEnumerator::count(p.domain, names);
  if (n > state_cap || n * n >= 64) {
    throw Error(ErrorKind::Budget, "semantic refinement over " + std::to_string(n) + " states exceeds cap " +
                                       std::to_string(state_cap));
  }
  ImplementationRelation r;
  r.states = all_assignments(p.domain, names);
  const std::uint64_t relations = std::uint64_t{1} << (n * n);
  for (r.bits = 0; r.bits < relations; ++r.bits) {
    if (satisfies(r, p.sub) && !satisfies(r, p.sup)) return false;
  }
  return true;
}

/// ⟨pre_s, post_s⟩ ⊔ ⟨pre_t, post_t⟩ =
/// ⟨pre_t || pre_s, (old(pre_t) -> post_t) && (old(pre_s) -> post_s)⟩.
inline MethodSpec join(const MethodSpec& s, const MethodSpec& t) {
  return MethodSpec{make_or({t.pre, s.pre}),
                    make_and({make_implies(make_old(t.pre), t.post), make_implies(make_old(s.pre), s.post)})};
}

/// Specification inheritance: join of every declared spec of `m` in supers_of(c).
inline MethodSpec effective_specification(const Hierarchy& h, const std::string& c, const std::string& m) {
  const auto chain = h.spec_chain(c, m);
  MethodSpec acc = chain.front().second;
  for (std::size_t i = 1; i < chain.size(); ++i) acc = join(chain[i].second, acc);
  return acc;
}

/// Which specs the subtype check compares.
enum class SpecLevel {
  Effective,    // specification inheritance (joined specs, conjoined invariants)
  MethodLevel,  // the assertions as written at each class
};

namespace detail {

inline void require_super(const Hierarchy& h, const std::string& s, const std::string& t) {
  if (!h.is_super_of(t, s)) {
    throw Error(ErrorKind::Validation, "'" + t + "' is not a superclass of '" + s + "'");
  }
}

}  // namespace detail

/// `s` is a strong behavioral subtype of `t`: for every method visible at
/// `t` the spec at `s` refines the spec at `t`, and inv_s implies inv_t.
inline bool strong_behavioral_subtype(const Hierarchy& h, const std::string& s, const std::string& t,
                                      SpecLevel level = SpecLevel::Effective) {
  detail::require_super(h, s, t);
  const Domain& d = h.domain();
  for (const auto& m : h.method_names()) {
    if (!h.find_declaring(t, m)) continue;
    const MethodSpec sub = level == SpecLevel::Effective ? effective_specification(h, s, m) : h.method_spec(s, m);
    const MethodSpec sup = level == SpecLevel::Effective ? effective_specification(h, t, m) : h.method_spec(t, m);
    if (!refines(sub, sup, d)) return false;
  }
  const Formula inv_s = level == SpecLevel::Effective
                            ? effective_invariant(h, Strategy::JoinComposition, s).formula
                            : h.get(s).invariant;
  const Formula inv_t = level == SpecLevel::Effective
                            ? effective_invariant(h, Strategy::JoinComposition, t).formula
                            : h.get(t).invariant;
  return implies(inv_s, inv_t, d);
}

/// Safe refinement of client-conforming specs: restricted to states where
/// the server's own precondition pre_s holds,
///   (1) effConPre_t -> effConPre_s           under every client binding, and
///   (2) old(effConPre_t) -> (effConPost_s -> post_t)   with the client bound to t.
inline bool check_safe_refinement(const Hierarchy& h, const std::string& s, const std::string& t,
                                  const std::string& m) {
  detail::require_super(h, s, t);
  const Domain& d = h.domain();
  const Formula pre_s = h.method_spec(s, m).pre;
  const Formula post_t = h.method_spec(t, m).post;
  const Formula con_pre_s = effective_precondition(h, Strategy::ClientConformance, s, m).formula;
  const Formula con_pre_t = effective_precondition(h, Strategy::ClientConformance, t, m).formula;
  const Formula con_post_s = effective_postcondition(h, Strategy::ClientConformance, s, m).formula;

  const bool entry = is_tautology(make_implies(pre_s, make_implies(con_pre_t, con_pre_s)), d);
  if (!entry) return false;
  CheckOptions bound;
  bound.client = t;
  return is_tautology(make_implies(make_old(pre_s), make_implies(make_old(con_pre_t), make_implies(con_post_s, post_t))),
                      d, bound);
}

// ---------------------------------------------------------------------------
// Exhaustive lattice checks over truth-function specs.

/// Every boolean function of `atoms` as a formula: constants for the two
/// constant functions, otherwise the disjunction of satisfying minterms.
/// Functions are ordered by their truth-table bit pattern.
inline std::vector<Formula> truth_function_formulas(const std::vector<std::string>& atoms) {
  const std::size_t rows = std::size_t{1} << atoms.size();
  const std::uint64_t functions = std::uint64_t{1} << rows;
  std::vector<Formula> out;
  for (std::uint64_t table = 0; table < functions; ++table) {
    if (table == 0) {
      out.push_back(Formula::constant(false));
      continue;
    }
    if (table == functions - 1) {
      out.push_back(Formula::constant(true));
      continue;
    }
    std::vector<Formula> minterms;
    for (std::size_t row = 0; row < rows; ++row) {
      if (((table >> row) & 1U) == 0) continue;
      std::vector<Formula> lits;
      for (std::size_t a = 0; a < atoms.size(); ++a) {
        Formula atom = Formula::atom(atoms[a]);
        lits.push_back(((row >> a) & 1U) ? atom : make_not(atom));
      }
      minterms.push_back(make_and(std::move(lits)));
    }
    out.push_back(make_or(std::move(minterms)));
  }
  return out;
}

/// All ⟨pre, post⟩ with pre and post drawn from the truth functions of `atoms`.
inline std::vector<MethodSpec> truth_function_specs(const std::vector<std::string>& atoms) {
  const auto fns = truth_function_formulas(atoms);
  std::vector<MethodSpec> out;
  for (const auto& pre : fns) {
    for (const auto& post : fns) out.push_back(MethodSpec{pre, post});
  }
  return out;
}

struct JoinLubOptions {
  std::size_t atoms = 1;
  /// 0 checks every pair / every third spec; otherwise that many random picks.
  std::size_t pair_samples = 0;
  std::size_t third_samples = 0;
  std::uint64_t seed = 1;
};

struct JoinLubReport {
  std::size_t specs = 0;
  std::size_t pairs = 0;
  std::size_t triples = 0;
  std::vector<std::string> counterexamples;

  bool ok() const { return counterexamples.empty(); }
};

inline constexpr std::size_t kMaxLubAtoms = 2;

/// Checks that join is an upper bound of both arguments and below every
/// common upper bound, over specs built from truth functions of the atoms.
inline JoinLubReport verify_join_lub(const JoinLubOptions& opts) {
  if (opts.atoms == 0 || opts.atoms > kMaxLubAtoms) {
    throw Error(ErrorKind::Budget, "join/lub check supports 1.." + std::to_string(kMaxLubAtoms) + " atoms");
  }
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < opts.atoms; ++i) atoms.push_back(std::string(1, static_cast<char>('A' + i)));
  const Domain d = boolean_domain(atoms);
  const auto specs = truth_function_specs(atoms);
  const std::size_t n = specs.size();

  JoinLubReport report;
  report.specs = n;
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  // refines(u, v) for all spec indices, computed lazily.
  std::vector<std::int8_t> memo(n * n, -1);
  auto refines_idx = [&](std::size_t u, std::size_t v) {
    std::int8_t& slot = memo[u * n + v];
    if (slot < 0) slot = refines(specs[u], specs[v], d) ? 1 : 0;
    return slot == 1;
  };
  auto describe = [&](const MethodSpec& s) { return "<" + to_string(s.pre) + ", " + to_string(s.post) + ">"; };

  auto check_pair = [&](std::size_t si, std::size_t ti) {
    ++report.pairs;
    const MethodSpec& s = specs[si];
    const MethodSpec& t = specs[ti];
    const MethodSpec j = join(s, t);
    if (!refines(j, t, d) || !refines(j, s, d)) {
      report.counterexamples.push_back("join not an upper bound of " + describe(s) + " and " + describe(t));
    }
    auto check_third = [&](std::size_t ui) {
      ++report.triples;
      if (refines_idx(ui, si) && refines_idx(ui, ti) && !refines(specs[ui], j, d)) {
        report.counterexamples.push_back(describe(specs[ui]) + " refines " + describe(s) + " and " + describe(t) +
                                         " but not their join");
      }
    };
    if (opts.third_samples == 0) {
      for (std::size_t ui = 0; ui < n; ++ui) check_third(ui);
    } else {
      for (std::size_t k = 0; k < opts.third_samples; ++k) check_third(pick(rng));
    }
  };

  if (opts.pair_samples == 0) {
    for (std::size_t si = 0; si < n; ++si) {
      for (std::size_t ti = 0; ti < n; ++ti) check_pair(si, ti);
    }
  } else {
    for (std::size_t k = 0; k < opts.pair_samples; ++k) check_pair(pick(rng), pick(rng));
  }
  return report;
}

}  // namespace bsv

#endif  // BSV_MATCHER_HPP
