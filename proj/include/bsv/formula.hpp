#ifndef BSV_FORMULA_HPP
#define BSV_FORMULA_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "bsv/error.hpp"

namespace bsv {

using Value = std::variant<bool, std::int64_t>;

inline std::string to_string(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::to_string(std::get<std::int64_t>(v));
}

enum class CmpOp { Lt, Le, Eq, Ne, Ge, Gt };

inline const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

/// Operator obtained by swapping the operands: `a op b` iff `b mirror(op) a`.
inline CmpOp mirror(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Ge: return CmpOp::Le;
    case CmpOp::Gt: return CmpOp::Lt;
    default: return op;
  }
}

inline bool compare(std::int64_t lhs, CmpOp op, std::int64_t rhs) {
  switch (op) {
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
    case CmpOp::Ge: return lhs >= rhs;
    case CmpOp::Gt: return lhs > rhs;
  }
  return false;
}

/// Immutable two-state assertion expression. Copies share structure.
///
/// Atoms read the post-state when one is supplied and the pre-state
/// otherwise; everything below an `old(...)` node reads the pre-state.
/// Client indicators are state independent and are true only for the class
/// bound as the caller's static type.
class Formula {
 public:
  enum class Kind { Constant, Atom, Compare, Client, Old, Not, And, Or, Implies, Iff };
  /// Right-hand side of a comparison: another variable or an integer literal.
  using Operand = std::variant<std::string, std::int64_t>;

  Formula() : Formula(constant(true)) {}

  static Formula constant(bool value) {
    Node n;
    n.kind = Kind::Constant;
    n.value = value;
    return Formula(std::move(n));
  }

  static Formula atom(std::string name) {
    Node n;
    n.kind = Kind::Atom;
    n.name = std::move(name);
    return Formula(std::move(n));
  }

  static Formula compare(std::string var, CmpOp op, Operand rhs) {
    Node n;
    n.kind = Kind::Compare;
    n.name = std::move(var);
    n.op = op;
    n.rhs = std::move(rhs);
    return Formula(std::move(n));
  }

  static Formula client(std::string class_name) {
    Node n;
    n.kind = Kind::Client;
    n.name = std::move(class_name);
    return Formula(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  bool value() const { return node_->value; }
  /// Atom or compared variable name, or the class of a client indicator.
  const std::string& name() const { return node_->name; }
  CmpOp op() const { return node_->op; }
  const Operand& rhs() const { return node_->rhs; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(std::size_t i = 0) const { return node_->children.at(i); }

  bool is_constant(bool v) const { return kind() == Kind::Constant && value() == v; }

  bool contains_old() const { return node_->has_old; }
  bool contains_client() const { return node_->has_client; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    return x.kind == y.kind && x.value == y.value && x.name == y.name && x.op == y.op &&
           x.rhs == y.rhs && x.children == y.children;
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind = Kind::Constant;
    bool value = true;
    std::string name;
    CmpOp op = CmpOp::Eq;
    Operand rhs = std::int64_t{0};
    std::vector<Formula> children;
    bool has_old = false;
    bool has_client = false;
  };

  explicit Formula(Node n) {
    n.has_old = n.kind == Kind::Old;
    n.has_client = n.kind == Kind::Client;
    for (const Formula& c : n.children) {
      n.has_old = n.has_old || c.contains_old();
      n.has_client = n.has_client || c.contains_client();
    }
    node_ = std::make_shared<const Node>(std::move(n));
  }

  friend Formula make_old(Formula f);
  friend Formula make_not(Formula f);
  friend Formula make_and(std::vector<Formula> parts);
  friend Formula make_or(std::vector<Formula> parts);
  friend Formula make_implies(Formula lhs, Formula rhs);
  friend Formula make_iff(Formula lhs, Formula rhs);

  static Formula compound(Kind kind, std::vector<Formula> children) {
    Node n;
    n.kind = kind;
    n.children = std::move(children);
    return Formula(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

/// Pre-state marker. Throws if `f` already contains an `old(...)`.
inline Formula make_old(Formula f) {
  if (f.contains_old()) {
    throw Error(ErrorKind::Validation, "old() must not be nested");
  }
  return Formula::compound(Formula::Kind::Old, {std::move(f)});
}

inline Formula make_not(Formula f) { return Formula::compound(Formula::Kind::Not, {std::move(f)}); }

/// Conjunction; the empty conjunction is `true` and a singleton is returned as is.
inline Formula make_and(std::vector<Formula> parts) {
  if (parts.empty()) return Formula::constant(true);
  if (parts.size() == 1) return std::move(parts.front());
  return Formula::compound(Formula::Kind::And, std::move(parts));
}

/// Disjunction; the empty disjunction is `false` and a singleton is returned as is.
inline Formula make_or(std::vector<Formula> parts) {
  if (parts.empty()) return Formula::constant(false);
  if (parts.size() == 1) return std::move(parts.front());
  return Formula::compound(Formula::Kind::Or, std::move(parts));
}

inline Formula make_implies(Formula lhs, Formula rhs) {
  return Formula::compound(Formula::Kind::Implies, {std::move(lhs), std::move(rhs)});
}

inline Formula make_iff(Formula lhs, Formula rhs) {
  return Formula::compound(Formula::Kind::Iff, {std::move(lhs), std::move(rhs)});
}

// ---------------------------------------------------------------------------
// Printing in the assertion grammar accepted by the parser.

namespace detail {

inline int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not: return 5;
    default: return 6;
  }
}

inline void print(const Formula& f, std::string& out);

inline void print_wrapped(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  print(f, out);
  if (parens) out += ')';
}

inline void print(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  const int prec = precedence(f.kind());
  switch (f.kind()) {
    case K::Constant:
      out += f.value() ? "true" : "false";
      return;
    case K::Atom:
      out += f.name();
      return;
    case K::Compare:
      out += f.name();
      out += ' ';
      out += to_string(f.op());
      out += ' ';
      if (const auto* var = std::get_if<std::string>(&f.rhs())) {
        out += *var;
      } else {
        out += std::to_string(std::get<std::int64_t>(f.rhs()));
      }
      return;
    case K::Client:
      out += "client(" + f.name() + ")";
      return;
    case K::Old:
      out += "old(";
      print(f.child(), out);
      out += ')';
      return;
    case K::Not:
      out += '!';
      print_wrapped(f.child(), precedence(f.child().kind()) < prec, out);
      return;
    case K::And:
    case K::Or: {
      const char* sep = f.kind() == K::And ? " && " : " || ";
      bool first = true;
      for (const Formula& c : f.children()) {
        if (!first) out += sep;
        first = false;
        print_wrapped(c, precedence(c.kind()) <= prec, out);
      }
      return;
    }
    case K::Implies:
      print_wrapped(f.child(0), precedence(f.child(0).kind()) <= prec, out);
      out += " -> ";
      print_wrapped(f.child(1), precedence(f.child(1).kind()) < prec, out);
      return;
    case K::Iff:
      print_wrapped(f.child(0), precedence(f.child(0).kind()) < prec, out);
      out += " <-> ";
      print_wrapped(f.child(1), precedence(f.child(1).kind()) <= prec, out);
      return;
  }
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::string out;
  detail::print(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Domains and assignments.

struct BoolSort {
  friend bool operator==(BoolSort, BoolSort) { return true; }
};

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

using Sort = std::variant<BoolSort, IntRange>;

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 20;

/// Finite carrier for evaluation and exhaustive checking: typed variables
/// plus the class names usable in client indicators.
class Domain {
 public:
  void declare_bool(const std::string& name) { declare(name, BoolSort{}); }

  void declare_int(const std::string& name, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) {
      throw Error(ErrorKind::Validation,
                  "empty range for '" + name + "': " + std::to_string(lo) + ".." + std::to_string(hi));
    }
    declare(name, IntRange{lo, hi});
  }

  void declare(const std::string& name, Sort sort) {
    if (vars_.count(name) != 0) {
      throw Error(ErrorKind::Validation, "variable '" + name + "' declared twice");
    }
    if (const auto* r = std::get_if<IntRange>(&sort); r != nullptr && r->lo > r->hi) {
      throw Error(ErrorKind::Validation, "empty range for '" + name + "'");
    }
    vars_.emplace(name, sort);
    order_.push_back(name);
  }

  bool has(std::string_view name) const { return vars_.find(name) != vars_.end(); }

  const Sort& sort_of(std::string_view name) const {
    auto it = vars_.find(name);
    if (it == vars_.end()) {
      throw Error(ErrorKind::Lookup, "undeclared variable '" + std::string(name) + "'");
    }
    return it->second;
  }

  /// Every value of the variable's sort, in ascending order (false < true).
  std::vector<Value> values_of(std::string_view name) const {
    std::vector<Value> out;
    const Sort& s = sort_of(name);
    if (std::holds_alternative<BoolSort>(s)) {
      out = {Value{false}, Value{true}};
    } else {
      const IntRange r = std::get<IntRange>(s);
      for (std::int64_t v = r.lo; v <= r.hi; ++v) out.emplace_back(v);
    }
    return out;
  }

  std::uint64_t cardinality(std::string_view name) const {
    const Sort& s = sort_of(name);
    if (std::holds_alternative<BoolSort>(s)) return 2;
    const IntRange r = std::get<IntRange>(s);
    return static_cast<std::uint64_t>(r.hi - r.lo) + 1;
  }

  /// Variable names in declaration order.
  const std::vector<std::string>& variables() const { return order_; }

  void add_class(const std::string& name) {
    if (std::find(classes_.begin(), classes_.end(), name) == classes_.end()) classes_.push_back(name);
  }
  const std::vector<std::string>& classes() const { return classes_; }

  std::uint64_t budget() const { return budget_; }
  void set_budget(std::uint64_t b) { budget_ = b; }

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.vars_ == b.vars_ && a.order_ == b.order_ && a.classes_ == b.classes_;
  }

 private:
  std::map<std::string, Sort, std::less<>> vars_;
  std::vector<std::string> order_;
  std::vector<std::string> classes_;
  std::uint64_t budget_ = kDefaultBudget;
};

/// Variable valuation for one program state.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const std::string, Value>> init) : values_(init.begin(), init.end()) {}

  void set(const std::string& name, Value v) { values_[name] = v; }

  const Value* find(std::string_view name) const {
    auto it = values_.find(name);
    return it == values_.end() ? nullptr : &it->second;
  }

  const Value& at(std::string_view name) const {
    const Value* v = find(name);
    if (v == nullptr) {
      throw Error(ErrorKind::Evaluation, "no value for variable '" + std::string(name) + "'");
    }
    return *v;
  }

  const std::map<std::string, Value, std::less<>>& values() const { return values_; }
  bool empty() const { return values_.empty(); }

  friend bool operator==(const Assignment&, const Assignment&) = default;
  friend auto operator<=>(const Assignment& a, const Assignment& b) {
    return a.values_ <=> b.values_;
  }

 private:
  std::map<std::string, Value, std::less<>> values_;
};

inline std::string to_string(const Assignment& a) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : a.values()) {
    if (!first) out += ", ";
    first = false;
    out += k + "=" + to_string(v);
  }
  return out + "}";
}

// ---------------------------------------------------------------------------
// Structural queries.

namespace detail {

inline void collect_vars(const Formula& f, bool under_old, std::set<std::string>& pre,
                         std::set<std::string>& cur) {
  using K = Formula::Kind;
  auto& bucket = under_old ? pre : cur;
  switch (f.kind()) {
    case K::Atom:
      bucket.insert(f.name());
      return;
    case K::Compare:
      bucket.insert(f.name());
      if (const auto* v = std::get_if<std::string>(&f.rhs())) bucket.insert(*v);
      return;
    case K::Old:
      collect_vars(f.child(), true, pre, cur);
      return;
    default:
      for (const Formula& c : f.children()) collect_vars(c, under_old, pre, cur);
  }
}

inline void collect_clients(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == Formula::Kind::Client) out.insert(f.name());
  for (const Formula& c : f.children()) collect_clients(c, out);
}

}  // namespace detail

/// Variables read from the pre-state (inside old) and from the current state.
struct VariableUse {
  std::set<std::string> old_state;
  std::set<std::string> current_state;

  std::set<std::string> all() const {
    std::set<std::string> out = old_state;
    out.insert(current_state.begin(), current_state.end());
    return out;
  }
};

inline VariableUse variables_of(const Formula& f) {
  VariableUse use;
  detail::collect_vars(f, false, use.old_state, use.current_state);
  return use;
}

inline std::set<std::string> clients_of(const Formula& f) {
  std::set<std::string> out;
  detail::collect_clients(f, out);
  return out;
}

/// Replaces every boolean atom named in `with` by the mapped formula.
inline Formula substitute(const Formula& f, const std::map<std::string, Formula>& with) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      auto it = with.find(f.name());
      return it == with.end() ? f : it->second;
    }
    case K::Constant:
    case K::Compare:
    case K::Client:
      return f;
    case K::Old:
      return make_old(substitute(f.child(), with));
    case K::Not:
      return make_not(substitute(f.child(), with));
    case K::And:
    case K::Or: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      for (const Formula& c : f.children()) parts.push_back(substitute(c, with));
      return f.kind() == K::And ? make_and(std::move(parts)) : make_or(std::move(parts));
    }
    case K::Implies:
      return make_implies(substitute(f.child(0), with), substitute(f.child(1), with));
    case K::Iff:
      return make_iff(substitute(f.child(0), with), substitute(f.child(1), with));
  }
  return f;
}

/// Where a formula is going to be used; decides which constructs are legal.
enum class FormulaRole { Precondition, Postcondition, Invariant, General };

/// Checks declaredness and sort agreement of every variable, plus the
/// old()/client() placement rules of `role`.
inline void validate(const Formula& f, const Domain& d, FormulaRole role) {
  using K = Formula::Kind;
  if (role == FormulaRole::Precondition || role == FormulaRole::Invariant) {
    if (f.contains_old()) {
      throw Error(ErrorKind::Validation, "old() is only allowed in postconditions: " + to_string(f));
    }
  }
  if (role != FormulaRole::General && f.contains_client()) {
    throw Error(ErrorKind::Validation,
                "client() indicators are not allowed in method-level assertions: " + to_string(f));
  }
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    switch (g.kind()) {
      case K::Atom:
        if (!std::holds_alternative<BoolSort>(d.sort_of(g.name()))) {
          throw Error(ErrorKind::Validation, "'" + g.name() + "' is not boolean");
        }
        return;
      case K::Compare: {
        if (!std::holds_alternative<IntRange>(d.sort_of(g.name()))) {
          throw Error(ErrorKind::Validation, "'" + g.name() + "' is not an integer");
        }
        if (const auto* v = std::get_if<std::string>(&g.rhs())) {
          if (!std::holds_alternative<IntRange>(d.sort_of(*v))) {
            throw Error(ErrorKind::Validation, "'" + *v + "' is not an integer");
          }
        }
        return;
      }
      case K::Client: {
        const auto& cs = d.classes();
        if (!cs.empty() && std::find(cs.begin(), cs.end(), g.name()) == cs.end()) {
          throw Error(ErrorKind::Lookup, "client() names unknown class '" + g.name() + "'");
        }
        return;
      }
      default:
        for (const Formula& c : g.children()) walk(c);
    }
  };
  walk(f);
}

// ---------------------------------------------------------------------------
// Evaluation.

namespace detail {

struct EvalContext {
  const Assignment& pre;
  const Assignment* post;
  std::optional<std::string_view> client;
};

inline const Value& lookup(const EvalContext& ctx, bool under_old, const std::string& name) {
  const Assignment& state = (under_old || ctx.post == nullptr) ? ctx.pre : *ctx.post;
  const Value* v = state.find(name);
  if (v == nullptr) {
    throw Error(ErrorKind::Evaluation, "undeclared variable '" + name + "'");
  }
  return *v;
}

inline std::int64_t int_value(const EvalContext& ctx, bool under_old, const std::string& name) {
  const Value& v = lookup(ctx, under_old, name);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw Error(ErrorKind::Evaluation, "'" + name + "' is not an integer");
}

inline bool eval(const Formula& f, const EvalContext& ctx, bool under_old) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Constant:
      return f.value();
    case K::Atom: {
      const Value& v = lookup(ctx, under_old, f.name());
      if (const auto* b = std::get_if<bool>(&v)) return *b;
      throw Error(ErrorKind::Evaluation, "'" + f.name() + "' is not boolean");
    }
    case K::Compare: {
      const std::int64_t lhs = int_value(ctx, under_old, f.name());
      const std::int64_t rhs = std::holds_alternative<std::int64_t>(f.rhs())
                                   ? std::get<std::int64_t>(f.rhs())
                                   : int_value(ctx, under_old, std::get<std::string>(f.rhs()));
      return compare(lhs, f.op(), rhs);
    }
    case K::Client:
      if (!ctx.client) {
        throw Error(ErrorKind::Evaluation, "client(" + f.name() + ") evaluated without a bound client");
      }
      return *ctx.client == f.name();
    case K::Old:
      if (ctx.post == nullptr) {
        throw Error(ErrorKind::Evaluation, "old() evaluated without a post-state");
      }
      return eval(f.child(), ctx, true);
    case K::Not:
      return !eval(f.child(), ctx, under_old);
    case K::And:
      for (const Formula& c : f.children()) {
        if (!eval(c, ctx, under_old)) return false;
      }
      return true;
    case K::Or:
      for (const Formula& c : f.children()) {
        if (eval(c, ctx, under_old)) return true;
      }
      return false;
    case K::Implies:
      return !eval(f.child(0), ctx, under_old) || eval(f.child(1), ctx, under_old);
    case K::Iff:
      return eval(f.child(0), ctx, under_old) == eval(f.child(1), ctx, under_old);
  }
  return false;
}

}  // namespace detail

/// Single-state evaluation. `old()` is an error here.
inline bool evaluate(const Formula& f, const Assignment& state,
                     std::optional<std::string_view> client = std::nullopt) {
  return detail::eval(f, detail::EvalContext{state, nullptr, client}, false);
}

/// Two-state evaluation: old() reads `pre`, everything else reads `post`.
inline bool evaluate(const Formula& f, const Assignment& pre, const Assignment& post,
                     std::optional<std::string_view> client = std::nullopt) {
  return detail::eval(f, detail::EvalContext{pre, &post, client}, false);
}

}  // namespace bsv

#endif  // BSV_FORMULA_HPP
