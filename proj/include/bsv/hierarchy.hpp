#ifndef BSV_HIERARCHY_HPP
#define BSV_HIERARCHY_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bsv/formula.hpp"
#include "bsv/tautology.hpp"

namespace bsv {

/// Method-level contract as written by the developer.
struct MethodSpec {
  Formula pre;
  Formula post;

  friend bool operator==(const MethodSpec&, const MethodSpec&) = default;
};

struct ClassDef {
  std::string name;
  std::optional<std::string> parent;
  Formula invariant = Formula::constant(true);
  std::map<std::string, MethodSpec> methods;

  friend bool operator==(const ClassDef&, const ClassDef&) = default;
};

/// Validated single-inheritance class forest over a shared domain.
class Hierarchy {
 public:
  Hierarchy() = default;

  /// Validates parents, acyclicity and every assertion; registers the class
  /// names with the domain for client indicators.
  Hierarchy(Domain domain, std::vector<ClassDef> classes) : domain_(std::move(domain)) {
    for (auto& c : classes) {
      if (classes_.count(c.name) != 0) {
        throw Error(ErrorKind::Validation, "class '" + c.name + "' defined twice");
      }
      order_.push_back(c.name);
      classes_.emplace(c.name, std::move(c));
    }
    for (const auto& name : order_) domain_.add_class(name);
    for (const auto& name : order_) {
      const ClassDef& c = classes_.at(name);
      if (c.parent && classes_.count(*c.parent) == 0) {
        throw Error(ErrorKind::Lookup, "unknown parent '" + *c.parent + "' of class '" + name + "'");
      }
    }
    for (const auto& name : order_) {
      std::set<std::string> seen{name};
      const ClassDef* cur = &classes_.at(name);
      while (cur->parent) {
        if (!seen.insert(*cur->parent).second) {
          throw Error(ErrorKind::Validation, "inheritance cycle through class '" + name + "'");
        }
        cur = &classes_.at(*cur->parent);
      }
    }
    for (const auto& name : order_) {
      const ClassDef& c = classes_.at(name);
      validate(c.invariant, domain_, FormulaRole::Invariant);
      for (const auto& [m, spec] : c.methods) {
        validate(spec.pre, domain_, FormulaRole::Precondition);
        validate(spec.post, domain_, FormulaRole::Postcondition);
      }
    }
  }

  const Domain& domain() const { return domain_; }
  void set_budget(std::uint64_t b) { domain_.set_budget(b); }
  /// Class names in definition order.
  const std::vector<std::string>& class_names() const { return order_; }
  bool has_class(const std::string& name) const { return classes_.count(name) != 0; }

  const ClassDef& get(const std::string& name) const {
    auto it = classes_.find(name);
    if (it == classes_.end()) throw Error(ErrorKind::Lookup, "unknown class '" + name + "'");
    return it->second;
  }

  /// Root-first superclass chain ending with `c` itself.
  std::vector<std::string> supers_of(const std::string& c) const {
    std::vector<std::string> chain;
    const ClassDef* cur = &get(c);
    chain.push_back(cur->name);
    while (cur->parent) {
      cur = &get(*cur->parent);
      chain.push_back(cur->name);
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
  }

  bool is_super_of(const std::string& sup, const std::string& sub) const {
    const auto chain = supers_of(sub);
    return std::find(chain.begin(), chain.end(), sup) != chain.end();
  }

  bool declares(const std::string& c, const std::string& m) const { return get(c).methods.count(m) != 0; }

  /// Most-derived class in supers_of(c) declaring `m`, or nothing.
  std::optional<std::string> find_declaring(const std::string& c, const std::string& m) const {
    const auto chain = supers_of(c);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      if (declares(*it, m)) return *it;
    }
    return std::nullopt;
  }

  /// Single dispatch: the class whose body runs for a receiver of dynamic type `dyn`.
  std::string resolve_method(const std::string& dyn, const std::string& m) const {
    auto found = find_declaring(dyn, m);
    if (!found) throw Error(ErrorKind::Lookup, "method '" + m + "' unknown in class '" + dyn + "'");
    return *found;
  }

  /// The spec of `m` in effect at `c` (declared or inherited).
  const MethodSpec& method_spec(const std::string& c, const std::string& m) const {
    return get(resolve_method(c, m)).methods.at(m);
  }

  /// Root-first declaring classes of `m` within supers_of(c) with their specs.
  std::vector<std::pair<std::string, MethodSpec>> spec_chain(const std::string& c, const std::string& m) const {
    std::vector<std::pair<std::string, MethodSpec>> out;
    for (const auto& s : supers_of(c)) {
      const auto& methods = get(s).methods;
      if (auto it = methods.find(m); it != methods.end()) out.emplace_back(s, it->second);
    }
    if (out.empty()) throw Error(ErrorKind::Lookup, "method '" + m + "' unknown in class '" + c + "'");
    return out;
  }

  /// Classes in supers_of(c) at which `m` is visible (declared there or above).
  std::vector<std::string> method_visible_supers(const std::string& c, const std::string& m) const {
    std::vector<std::string> out;
    bool seen = false;
    for (const auto& s : supers_of(c)) {
      seen = seen || declares(s, m);
      if (seen) out.push_back(s);
    }
    if (out.empty()) throw Error(ErrorKind::Lookup, "method '" + m + "' unknown in class '" + c + "'");
    return out;
  }

  /// Every method name declared anywhere, sorted.
  std::set<std::string> method_names() const {
    std::set<std::string> out;
    for (const auto& [n, c] : classes_) {
      for (const auto& [m, s] : c.methods) out.insert(m);
    }
    return out;
  }

  /// Classes without a subclass, in definition order.
  std::vector<std::string> leaves() const {
    std::set<std::string> parents;
    for (const auto& [n, c] : classes_) {
      if (c.parent) parents.insert(*c.parent);
    }
    std::vector<std::string> out;
    for (const auto& n : order_) {
      if (parents.count(n) == 0) out.push_back(n);
    }
    return out;
  }

  friend bool operator==(const Hierarchy& a, const Hierarchy& b) {
    return a.domain_ == b.domain_ && a.order_ == b.order_ && a.classes_ == b.classes_;
  }

 private:
  Domain domain_;
  std::map<std::string, ClassDef> classes_;
  std::vector<std::string> order_;
};

enum class ConstraintRole { Pre, Post, Inv, View };

inline const char* to_string(ConstraintRole r) {
  switch (r) {
    case ConstraintRole::Pre: return "pre";
    case ConstraintRole::Post: return "post";
    case ConstraintRole::Inv: return "inv";
    case ConstraintRole::View: return "view";
  }
  return "?";
}

/// A method-level hierarchy violation between the supertype `super` and
/// the overriding (or inheriting, for invariants) subtype `sub`.
struct Violation {
  ConstraintRole kind;
  std::string super;
  std::string sub;
  std::optional<Counterexample> witness;  // static mode only

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Static mode: adjacent declaring pairs (T, S) where the contravariance
/// pre_T -> pre_S, the covariance post_S -> post_T, or inv_S -> inv_T fails
/// as a tautology over the domain.
///
/// At-state mode: the same implications checked at one concrete state
/// (pair). A pair is flagged when the supertype constraint holds and the
/// subtype constraint does not (pre), or the other way round (post, inv).
class ViolationDetector {
 public:
  explicit ViolationDetector(const Hierarchy& h) : h_(h) {}

  std::vector<Violation> detect_static(const std::string& m) const {
    std::vector<Violation> out;
    for (const auto& [sup, sub] : method_pairs(m)) {
      const MethodSpec& t = h_.get(sup).methods.at(m);
      const MethodSpec& s = h_.get(sub).methods.at(m);
      if (auto cx = find_counterexample(make_implies(t.pre, s.pre), h_.domain())) {
        out.push_back({ConstraintRole::Pre, sup, sub, cx});
      }
      if (auto cx = find_counterexample(make_implies(s.post, t.post), h_.domain())) {
        out.push_back({ConstraintRole::Post, sup, sub, cx});
      }
    }
    for (const auto& [sup, sub] : invariant_pairs(m)) {
      if (auto cx = find_counterexample(make_implies(h_.get(sub).invariant, h_.get(sup).invariant), h_.domain())) {
        out.push_back({ConstraintRole::Inv, sup, sub, cx});
      }
    }
    return out;
  }

  std::vector<Violation> detect_at_state(const std::string& m, const Assignment& pre,
                                         const std::optional<Assignment>& post) const {
    std::vector<Violation> out;
    const Assignment& last = post ? *post : pre;
    for (const auto& [sup, sub] : method_pairs(m)) {
      const MethodSpec& t = h_.get(sup).methods.at(m);
      const MethodSpec& s = h_.get(sub).methods.at(m);
      if (evaluate(t.pre, pre) && !evaluate(s.pre, pre)) {
        out.push_back({ConstraintRole::Pre, sup, sub, std::nullopt});
      }
      if (post && evaluate(s.post, pre, *post) && !evaluate(t.post, pre, *post)) {
        out.push_back({ConstraintRole::Post, sup, sub, std::nullopt});
      }
    }
    for (const auto& [sup, sub] : invariant_pairs(m)) {
      if (evaluate(h_.get(sub).invariant, last) && !evaluate(h_.get(sup).invariant, last)) {
        out.push_back({ConstraintRole::Inv, sup, sub, std::nullopt});
      }
    }
    return out;
  }

 private:
  // (nearest declaring ancestor, overriding class) for every override of m.
  std::vector<std::pair<std::string, std::string>> method_pairs(const std::string& m) const {
    std::vector<std::pair<std::string, std::string>> out;
    bool any = false;
    for (const auto& name : h_.class_names()) {
      if (!h_.declares(name, m)) continue;
      any = true;
      const auto& parent = h_.get(name).parent;
      if (!parent) continue;
      if (auto sup = h_.find_declaring(*parent, m)) out.emplace_back(*sup, name);
    }
    if (!any) throw Error(ErrorKind::Lookup, "method '" + m + "' is not declared in the hierarchy");
    return out;
  }

  // (parent, child) for every class at which m is visible and whose parent sees it too.
  std::vector<std::pair<std::string, std::string>> invariant_pairs(const std::string& m) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& name : h_.class_names()) {
      const auto& parent = h_.get(name).parent;
      if (parent && h_.find_declaring(*parent, m)) out.emplace_back(*parent, name);
    }
    return out;
  }

  const Hierarchy& h_;
};

inline std::vector<Violation> detect_hierarchy_violations(const Hierarchy& h, const std::string& m) {
  return ViolationDetector(h).detect_static(m);
}

inline std::vector<Violation> detect_hierarchy_violations(const Hierarchy& h, const std::string& m,
                                                          const Assignment& pre,
                                                          const std::optional<Assignment>& post = std::nullopt) {
  return ViolationDetector(h).detect_at_state(m, pre, post);
}

}  // namespace bsv

#endif  // BSV_HIERARCHY_HPP
