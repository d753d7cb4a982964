#ifndef BSV_TAUTOLOGY_HPP
#define BSV_TAUTOLOGY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsv/formula.hpp"

namespace bsv {

/// An assignment (pair) under which a formula is false.
struct Counterexample {
  Assignment pre;
  std::optional<Assignment> post;  // set when the formula was checked over two states
  std::optional<std::string> client;

  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

inline std::string to_string(const Counterexample& c) {
  std::string out = "pre=" + to_string(c.pre);
  if (c.post) out += " post=" + to_string(*c.post);
  if (c.client) out += " client=" + *c.client;
  return out;
}

struct CheckOptions {
  /// Fix the client binding instead of enumerating every class of the domain.
  std::optional<std::string> client;
  /// Enumerate pre- and post-states independently even when the formula has
  /// no old(). Formulas containing old() are always checked over two states.
  bool paired_states = false;
};

/// Odometer over the cartesian product of variable values.
class AssignmentEnumerator {
 public:
  AssignmentEnumerator(const Domain& d, const std::vector<std::string>& vars) {
    for (const auto& v : vars) slots_.push_back(Slot{v, d.values_of(v), 0});
    for (const auto& s : slots_) current_.set(s.name, s.values.front());
  }

  const Assignment& current() const { return current_; }

  /// Advances to the next assignment; false once every assignment was visited.
  bool next() {
    for (auto& s : slots_) {
      if (++s.index < s.values.size()) {
        current_.set(s.name, s.values[s.index]);
        return true;
      }
      s.index = 0;
      current_.set(s.name, s.values.front());
    }
    return false;
  }

  static std::uint64_t count(const Domain& d, const std::vector<std::string>& vars) {
    std::uint64_t n = 1;
    for (const auto& v : vars) n = saturating_mul(n, d.cardinality(v));
    return n;
  }

  static std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
    return a * b;
  }

 private:
  struct Slot {
    std::string name;
    std::vector<Value> values;
    std::size_t index;
  };
  std::vector<Slot> slots_;
  Assignment current_;
};

/// Every assignment over `vars`, in enumeration order.
inline std::vector<Assignment> all_assignments(const Domain& d, const std::vector<std::string>& vars) {
  const std::uint64_t n = AssignmentEnumerator::count(d, vars);
  if (n > d.budget()) {
    throw Error(ErrorKind::Budget, std::to_string(n) + " assignments exceed budget " + std::to_string(d.budget()));
  }
  std::vector<Assignment> out;
  out.reserve(static_cast<std::size_t>(n));
  AssignmentEnumerator e(d, vars);
  do {
    out.push_back(e.current());
  } while (e.next());
  return out;
}

/// Searches exhaustively for an assignment that falsifies `f`. Only the
/// variables occurring in `f` are enumerated; with old() present the
/// pre-state variables (under old) and post-state variables are enumerated
/// independently. Client indicators are bound one-hot to each class of the
/// domain unless the options fix the client.
inline std::optional<Counterexample> find_counterexample(const Formula& f, const Domain& d,
                                                         const CheckOptions& opts = {}) {
  validate(f, d, FormulaRole::General);
  const VariableUse use = variables_of(f);
  const bool two_state = f.contains_old() || opts.paired_states;

  std::vector<std::string> pre_vars;
  std::vector<std::string> post_vars;
  if (two_state) {
    pre_vars.assign(use.old_state.begin(), use.old_state.end());
    post_vars.assign(use.current_state.begin(), use.current_state.end());
  } else {
    const auto all = use.all();
    pre_vars.assign(all.begin(), all.end());
  }

  std::vector<std::optional<std::string>> bindings;
  if (opts.client) {
    bindings.emplace_back(opts.client);
  } else if (f.contains_client()) {
    if (d.classes().empty()) {
      throw Error(ErrorKind::Evaluation, "client() indicators present but the domain lists no classes");
    }
    for (const auto& c : d.classes()) bindings.emplace_back(c);
  } else {
    bindings.emplace_back(std::nullopt);
  }

  std::uint64_t total = AssignmentEnumerator::saturating_mul(AssignmentEnumerator::count(d, pre_vars),
                                                             AssignmentEnumerator::count(d, post_vars));
  total = AssignmentEnumerator::saturating_mul(total, bindings.size());
  if (total > d.budget()) {
    throw Error(ErrorKind::Budget,
                std::to_string(total) + " assignments exceed budget " + std::to_string(d.budget()) +
                    " while checking " + to_string(f));
  }

  for (const auto& client : bindings) {
    std::optional<std::string_view> bound;
    if (client) bound = *client;
    AssignmentEnumerator pre(d, pre_vars);
    do {
      if (!two_state) {
        if (!evaluate(f, pre.current(), bound)) {
          return Counterexample{pre.current(), std::nullopt, client};
        }
        continue;
      }
      AssignmentEnumerator post(d, post_vars);
      do {
        if (!evaluate(f, pre.current(), post.current(), bound)) {
          return Counterexample{pre.current(), post.current(), client};
        }
      } while (post.next());
    } while (pre.next());
  }
  return std::nullopt;
}

inline bool is_tautology(const Formula& f, const Domain& d, const CheckOptions& opts = {}) {
  return !find_counterexample(f, d, opts).has_value();
}

/// `a` is stronger than (implies) `b` over the domain.
inline bool implies(const Formula& a, const Formula& b, const Domain& d, const CheckOptions& opts = {}) {
  return is_tautology(make_implies(a, b), d, opts);
}

inline bool equivalent(const Formula& a, const Formula& b, const Domain& d, const CheckOptions& opts = {}) {
  return implies(a, b, d, opts) && implies(b, a, d, opts);
}

/// Domain with one boolean variable per name; convenient for checks over
/// fresh propositional atoms.
inline Domain boolean_domain(const std::vector<std::string>& atoms, const std::vector<std::string>& classes = {}) {
  Domain d;
  for (const auto& a : atoms) d.declare_bool(a);
  for (const auto& c : classes) d.add_class(c);
  return d;
}

}  // namespace bsv

#endif  // BSV_TAUTOLOGY_HPP
