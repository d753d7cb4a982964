#ifndef BSV_STRATEGY_HPP
#define BSV_STRATEGY_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bsv/hierarchy.hpp"

namespace bsv {

enum class Strategy { Percolation, JoinComposition, ClientConformance };

inline constexpr std::array<Strategy, 3> kAllStrategies{Strategy::Percolation, Strategy::JoinComposition,
                                                        Strategy::ClientConformance};

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Percolation: return "percolation";
    case Strategy::JoinComposition: return "join";
    case Strategy::ClientConformance: return "client";
  }
  return "?";
}

inline std::optional<Strategy> parse_strategy(std::string_view s) {
  if (s == "percolation") return Strategy::Percolation;
  if (s == "join") return Strategy::JoinComposition;
  if (s == "client") return Strategy::ClientConformance;
  return std::nullopt;
}

enum class Aggregation { Conjunction, Disjunction };

/// One conjunct/disjunct of an effective constraint and where it came from.
struct ConstraintPart {
  std::string owner;                // class whose assertion the part checks
  ConstraintRole role;
  std::optional<std::string> view;  // client class guarding the part (client conformance)
  Formula formula;
};

/// A runtime-checked constraint. `formula` is logically equivalent to the
/// aggregation of `parts`; for client-conforming preconditions it is kept in
/// the factored form (effView && pre) while `parts` hold the distributed
/// terms (view_T && pre), one per client class.
struct EffectiveConstraint {
  Formula formula;
  Aggregation aggregation = Aggregation::Conjunction;
  std::vector<ConstraintPart> parts;
};

/// Invariants are checked before and after the call; under client
/// conformance the exit check reads the guard's precondition in the pre-state.
enum class Phase { Entry, Exit };

namespace detail {

inline Formula view_guard(const Hierarchy& h, const std::string& client, const std::string& m, bool in_pre_state) {
  const Formula& pre = h.method_spec(client, m).pre;
  return make_and({Formula::client(client), in_pre_state ? make_old(pre) : pre});
}

}  // namespace detail

/// effView at `c`: disjunction of client_T && pre_T over every superclass T
/// of `c` at which the method is visible (pre_T inherited when T does not
/// override).
inline Formula effective_view(const Hierarchy& h, const std::string& c, const std::string& m) {
  std::vector<Formula> views;
  for (const auto& t : h.method_visible_supers(c, m)) views.push_back(detail::view_guard(h, t, m, false));
  return make_or(std::move(views));
}

/// Effective precondition of `m` for a receiver of dynamic class `c`.
inline EffectiveConstraint effective_precondition(const Hierarchy& h, Strategy s, const std::string& c,
                                                  const std::string& m) {
  EffectiveConstraint out;
  out.aggregation = Aggregation::Disjunction;
  if (s != Strategy::ClientConformance) {
    std::vector<Formula> pres;
    for (const auto& [owner, spec] : h.spec_chain(c, m)) {
      pres.push_back(spec.pre);
      out.parts.push_back({owner, ConstraintRole::Pre, std::nullopt, spec.pre});
    }
    out.formula = make_or(std::move(pres));
    return out;
  }
  const Formula& own = h.method_spec(c, m).pre;
  std::vector<Formula> views;
  for (const auto& t : h.method_visible_supers(c, m)) {
    Formula view = detail::view_guard(h, t, m, false);
    views.push_back(view);
    out.parts.push_back({h.resolve_method(t, m), ConstraintRole::View, t, make_and({view, own})});
  }
  out.formula = make_and({make_or(std::move(views)), own});
  return out;
}

/// Effective postcondition; preconditions used as guards are old()-wrapped.
inline EffectiveConstraint effective_postcondition(const Hierarchy& h, Strategy s, const std::string& c,
                                                   const std::string& m) {
  EffectiveConstraint out;
  out.aggregation = Aggregation::Conjunction;
  std::vector<Formula> conjuncts;
  switch (s) {
    case Strategy::Percolation:
      for (const auto& [owner, spec] : h.spec_chain(c, m)) {
        conjuncts.push_back(spec.post);
        out.parts.push_back({owner, ConstraintRole::Post, std::nullopt, spec.post});
      }
      break;
    case Strategy::JoinComposition:
      for (const auto& [owner, spec] : h.spec_chain(c, m)) {
        Formula guarded = make_implies(make_old(spec.pre), spec.post);
        conjuncts.push_back(guarded);
        out.parts.push_back({owner, ConstraintRole::Post, std::nullopt, guarded});
      }
      break;
    case Strategy::ClientConformance:
      for (const auto& t : h.method_visible_supers(c, m)) {
        Formula con = make_implies(detail::view_guard(h, t, m, true), h.method_spec(t, m).post);
        conjuncts.push_back(con);
        out.parts.push_back({h.resolve_method(t, m), ConstraintRole::Post, t, con});
      }
      break;
  }
  out.formula = make_and(std::move(conjuncts));
  return out;
}

/// Effective invariant of class `c`. Percolation and join composition
/// conjoin every invariant in supers_of(c); client conformance guards each
/// inv_T by view_T, which needs the method under check.
inline EffectiveConstraint effective_invariant(const Hierarchy& h, Strategy s, const std::string& c,
                                               const std::optional<std::string>& m = std::nullopt,
                                               Phase phase = Phase::Entry) {
  EffectiveConstraint out;
  out.aggregation = Aggregation::Conjunction;
  std::vector<Formula> conjuncts;
  if (s != Strategy::ClientConformance) {
    for (const auto& t : h.supers_of(c)) {
      const Formula& inv = h.get(t).invariant;
      conjuncts.push_back(inv);
      out.parts.push_back({t, ConstraintRole::Inv, std::nullopt, inv});
    }
    out.formula = make_and(std::move(conjuncts));
    return out;
  }
  if (!m) {
    throw Error(ErrorKind::Evaluation, "client-conforming invariants need the method under check");
  }
  for (const auto& t : h.supers_of(c)) {
    // A class above the method's first declaration cannot be the static type of a caller.
    if (!h.find_declaring(t, *m)) continue;
    Formula con = make_implies(detail::view_guard(h, t, *m, phase == Phase::Exit), h.get(t).invariant);
    conjuncts.push_back(con);
    out.parts.push_back({t, ConstraintRole::Inv, t, con});
  }
  out.formula = make_and(std::move(conjuncts));
  return out;
}

}  // namespace bsv

#endif  // BSV_STRATEGY_HPP
