#ifndef BSV_DSL_HPP
#define BSV_DSL_HPP

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bsv/hierarchy.hpp"
#include "bsv/parser.hpp"
#include "bsv/runtime.hpp"
#include "bsv/strategy.hpp"

namespace bsv {

struct RunConfig {
  std::vector<Strategy> strategies{kAllStrategies.begin(), kAllStrategies.end()};
  std::uint64_t budget = kDefaultBudget;
  /// Count rejected calls as failures when computing the exit status.
  bool reject_is_error = false;
};

/// Parsed `.bsv` source: domain, hierarchy, scenarios, optional config.
struct ScenarioFile {
  Hierarchy hierarchy;
  std::vector<CallScenario> scenarios;
  RunConfig config;

  const CallScenario* find(const std::string& name) const {
    for (const auto& s : scenarios) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }
};

/// Checks that `a` assigns every domain variable a value of its sort.
inline void validate_assignment(const Domain& d, const Assignment& a, const std::string& what) {
  for (const auto& [name, value] : a.values()) {
    if (!d.has(name)) throw Error(ErrorKind::Lookup, what + " assigns undeclared variable '" + name + "'");
    const Sort& s = d.sort_of(name);
    if (std::holds_alternative<BoolSort>(s)) {
      if (!std::holds_alternative<bool>(value)) {
        throw Error(ErrorKind::Validation, what + ": '" + name + "' expects true or false");
      }
      continue;
    }
    const auto* i = std::get_if<std::int64_t>(&value);
    const IntRange r = std::get<IntRange>(s);
    if (i == nullptr || *i < r.lo || *i > r.hi) {
      throw Error(ErrorKind::Validation, what + ": '" + name + "' must be an integer in " + std::to_string(r.lo) +
                                             ".." + std::to_string(r.hi));
    }
  }
  for (const auto& name : d.variables()) {
    if (a.find(name) == nullptr) throw Error(ErrorKind::Validation, what + " lacks a value for '" + name + "'");
  }
}

namespace detail {

class DslParser {
 public:
  explicit DslParser(std::string_view src) : cur_(tokenize(src)) {}

  ScenarioFile parse() {
    while (!cur_.at_end()) {
      const Token& t = cur_.peek();
      if (t.type != Token::Type::Ident) cur_.fail("expected 'domain', 'class', 'scenario', 'truthconfig' or 'config'");
      if (t.text == "domain") parse_domain();
      else if (t.text == "class") parse_class();
      else if (t.text == "scenario") parse_scenario();
      else if (t.text == "truthconfig") parse_truthconfig();
      else if (t.text == "config") parse_config();
      else cur_.fail("expected 'domain', 'class', 'scenario', 'truthconfig' or 'config'");
    }
    return finish();
  }

 private:
  struct Located {
    Formula formula;
    FormulaRole role;
    std::size_t line;
    std::size_t column;
  };
  struct ScenarioAt {
    std::size_t line;
    std::size_t column;
  };

  void parse_domain() {
    cur_.expect_keyword("domain");
    std::vector<std::pair<std::string, Token>> names;
    do {
      const Token at = cur_.peek();
      names.emplace_back(cur_.expect_ident("variable name"), at);
    } while (cur_.accept(","));
    cur_.expect(":");
    Sort sort = BoolSort{};
    if (cur_.is_keyword("bool")) {
      cur_.take();
    } else if (cur_.is_keyword("int")) {
      cur_.take();
      cur_.expect("[");
      const Token at = cur_.peek();
      const std::int64_t lo = cur_.expect_int();
      cur_.expect("..");
      const std::int64_t hi = cur_.expect_int();
      cur_.expect("]");
      if (lo > hi) throw Error(ErrorKind::Validation, "empty integer range", at.line, at.column);
      sort = IntRange{lo, hi};
    } else {
      cur_.fail("expected 'bool' or 'int'");
    }
    cur_.expect(";");
    for (const auto& [name, at] : names) {
      if (is_reserved(name)) throw Error(ErrorKind::Validation, "'" + name + "' is a reserved word", at.line, at.column);
      if (domain_.has(name)) {
        throw Error(ErrorKind::Validation, "variable '" + name + "' declared twice", at.line, at.column);
      }
      domain_.declare(name, sort);
    }
  }

  Formula parse_assertion(FormulaRole role) {
    cur_.expect(":");
    const Token at = cur_.peek();
    Formula f = cur_.parse_formula();
    cur_.expect(";");
    formulas_.push_back({f, role, at.line, at.column});
    return f;
  }

  void parse_class() {
    cur_.expect_keyword("class");
    const Token at = cur_.peek();
    ClassDef c;
    c.name = cur_.expect_ident("class name");
    if (cur_.is_keyword("extends")) {
      cur_.take();
      c.parent = cur_.expect_ident("parent class name");
    }
    for (const auto& existing : classes_) {
      if (existing.name == c.name) {
        throw Error(ErrorKind::Validation, "class '" + c.name + "' defined twice", at.line, at.column);
      }
    }
    class_at_.push_back({at.line, at.column});
    cur_.expect("{");
    bool have_invariant = false;
    while (!cur_.accept("}")) {
      if (cur_.is_keyword("invariant")) {
        if (have_invariant) cur_.fail("duplicate invariant");
        cur_.take();
        c.invariant = parse_assertion(FormulaRole::Invariant);
        have_invariant = true;
      } else if (cur_.is_keyword("method")) {
        cur_.take();
        const Token mat = cur_.peek();
        std::string m = cur_.expect_ident("method name");
        if (c.methods.count(m) != 0) {
          throw Error(ErrorKind::Validation, "method '" + m + "' declared twice in '" + c.name + "'", mat.line,
                      mat.column);
        }
        MethodSpec spec;
        bool have_pre = false;
        bool have_post = false;
        cur_.expect("{");
        while (!cur_.accept("}")) {
          if (cur_.is_keyword("pre") && !have_pre) {
            cur_.take();
            spec.pre = parse_assertion(FormulaRole::Precondition);
            have_pre = true;
          } else if (cur_.is_keyword("post") && !have_post) {
            cur_.take();
            spec.post = parse_assertion(FormulaRole::Postcondition);
            have_post = true;
          } else {
            cur_.fail("expected 'pre' or 'post'");
          }
        }
        c.methods.emplace(std::move(m), std::move(spec));
      } else {
        cur_.fail("expected 'invariant', 'method' or '}'");
      }
    }
    classes_.push_back(std::move(c));
  }

  std::string parse_field(std::string_view key) {
    cur_.expect_keyword(key);
    cur_.expect(":");
    std::string v = cur_.expect_ident();
    cur_.expect(";");
    return v;
  }

  void begin_scenario(CallScenario& sc, std::string_view keyword) {
    cur_.expect_keyword(keyword);
    const Token at = cur_.peek();
    sc.name = cur_.expect_ident("scenario name");
    if (!names_.insert(sc.name).second) {
      throw Error(ErrorKind::Validation, "scenario '" + sc.name + "' defined twice", at.line, at.column);
    }
    scenario_at_.push_back({at.line, at.column});
    cur_.expect("{");
    sc.client_static = parse_field("client");
    sc.receiver_dynamic = parse_field("receiver");
    sc.method = parse_field("call");
  }

  Assignment parse_state() {
    Assignment a;
    cur_.expect("{");
    if (!cur_.accept("}")) {
      do {
        const Token at = cur_.peek();
        std::string var = cur_.expect_ident("variable name");
        cur_.expect("=");
        Value v;
        if (cur_.is_keyword("true") || cur_.is_keyword("false")) {
          v = cur_.take().text == "true";
        } else {
          v = cur_.expect_int();
        }
        if (a.find(var) != nullptr) {
          throw Error(ErrorKind::Validation, "variable '" + var + "' assigned twice", at.line, at.column);
        }
        a.set(var, v);
      } while (cur_.accept(","));
      cur_.expect("}");
    }
    cur_.accept(";");
    return a;
  }

  void parse_scenario() {
    CallScenario sc;
    begin_scenario(sc, "scenario");
    StateMode st;
    cur_.expect_keyword("prestate");
    st.pre = parse_state();
    if (cur_.is_keyword("poststate")) {
      cur_.take();
      st.post = parse_state();
    } else {
      st.post = st.pre;
    }
    cur_.expect("}");
    sc.mode = std::move(st);
    scenarios_.push_back(std::move(sc));
  }

  void parse_truthconfig() {
    CallScenario sc;
    begin_scenario(sc, "truthconfig");
    TruthMode tm;
    while (!cur_.accept("}")) {
      const Token at = cur_.peek();
      std::map<std::string, bool>* table = nullptr;
      if (cur_.is_keyword("pre")) table = &tm.pre;
      else if (cur_.is_keyword("post")) table = &tm.post;
      else if (cur_.is_keyword("inv")) table = &tm.inv;
      else cur_.fail("expected 'pre', 'post', 'inv' or '}'");
      cur_.take();
      do {
        std::string cls = cur_.expect_ident("class name");
        cur_.expect("=");
        if (!cur_.is_keyword("true") && !cur_.is_keyword("false")) cur_.fail("expected true or false");
        const bool v = cur_.take().text == "true";
        if (!table->emplace(cls, v).second) {
          throw Error(ErrorKind::Validation, "duplicate truth value for " + at.text + " " + cls, at.line, at.column);
        }
      } while (cur_.accept(","));
      cur_.expect(";");
    }
    sc.mode = std::move(tm);
    scenarios_.push_back(std::move(sc));
  }

  void parse_config() {
    cur_.expect_keyword("config");
    cur_.expect("{");
    while (!cur_.accept("}")) {
      const Token key = cur_.peek();
      const std::string k = cur_.expect_ident("config key");
      cur_.expect(":");
      if (k == "strategy") {
        config_.strategies.clear();
        do {
          const Token at = cur_.peek();
          const std::string v = cur_.expect_ident("strategy");
          if (v == "all") {
            config_.strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
          } else if (auto s = parse_strategy(v)) {
            config_.strategies.push_back(*s);
          } else {
            throw Error(ErrorKind::Validation, "unknown strategy '" + v + "'", at.line, at.column);
          }
        } while (cur_.accept(","));
      } else if (k == "budget") {
        const Token at = cur_.peek();
        const std::int64_t b = cur_.expect_int();
        if (b <= 0) throw Error(ErrorKind::Validation, "budget must be positive", at.line, at.column);
        config_.budget = static_cast<std::uint64_t>(b);
      } else if (k == "reject_is_error") {
        if (!cur_.is_keyword("true") && !cur_.is_keyword("false")) cur_.fail("expected true or false");
        config_.reject_is_error = cur_.take().text == "true";
      } else {
        throw Error(ErrorKind::Validation, "unknown config key '" + k + "'", key.line, key.column);
      }
      cur_.expect(";");
    }
  }

  static bool is_reserved(const std::string& s) {
    static const std::set<std::string> kReserved{"true", "false", "old", "client"};
    return kReserved.count(s) != 0;
  }

  ScenarioFile finish() {
    Domain check_domain = domain_;
    for (const auto& c : classes_) check_domain.add_class(c.name);
    for (const auto& f : formulas_) {
      try {
        validate(f.formula, check_domain, f.role);
      } catch (const Error& e) {
        throw Error(e.kind(), strip_kind(e), f.line, f.column);
      }
    }
    ScenarioFile out;
    out.config = config_;
    domain_.set_budget(config_.budget);
    try {
      out.hierarchy = Hierarchy(domain_, classes_);
    } catch (const Error& e) {
      // Attribute structural errors to the first class named in the message.
      for (std::size_t i = 0; i < classes_.size(); ++i) {
        if (std::string(e.what()).find("'" + classes_[i].name + "'") != std::string::npos) {
          throw Error(e.kind(), strip_kind(e), class_at_[i].line, class_at_[i].column);
        }
      }
      throw;
    }
    for (std::size_t i = 0; i < scenarios_.size(); ++i) {
      const CallScenario& sc = scenarios_[i];
      try {
        detail::validate_call(out.hierarchy, sc);
        if (const auto* st = std::get_if<StateMode>(&sc.mode)) {
          validate_assignment(out.hierarchy.domain(), st->pre, "prestate of '" + sc.name + "'");
          validate_assignment(out.hierarchy.domain(), st->post, "poststate of '" + sc.name + "'");
        }
      } catch (const Error& e) {
        throw Error(e.kind(), strip_kind(e), scenario_at_[i].line, scenario_at_[i].column);
      }
    }
    out.scenarios = std::move(scenarios_);
    return out;
  }

  static std::string strip_kind(const Error& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    return colon == std::string::npos ? msg : msg.substr(colon + 2);
  }

  TokenCursor cur_;
  Domain domain_;
  std::vector<ClassDef> classes_;
  std::vector<ScenarioAt> class_at_;
  std::vector<Located> formulas_;
  std::vector<CallScenario> scenarios_;
  std::vector<ScenarioAt> scenario_at_;
  std::set<std::string> names_;
  RunConfig config_;
};

}  // namespace detail

inline ScenarioFile parse_scenario_file(std::string_view text) { return detail::DslParser(text).parse(); }

inline Hierarchy parse_hierarchy(std::string_view text) { return parse_scenario_file(text).hierarchy; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Lookup, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ScenarioFile load_scenario_file(const std::string& path) { return parse_scenario_file(read_file(path)); }

/// Renders the domain and classes back into source form.
inline std::string serialize(const Hierarchy& h) {
  std::string out;
  const Domain& d = h.domain();
  for (const auto& v : d.variables()) {
    const Sort& s = d.sort_of(v);
    out += "domain " + v + ": ";
    if (std::holds_alternative<BoolSort>(s)) {
      out += "bool;\n";
    } else {
      const IntRange r = std::get<IntRange>(s);
      out += "int[" + std::to_string(r.lo) + ".." + std::to_string(r.hi) + "];\n";
    }
  }
  for (const auto& name : h.class_names()) {
    const ClassDef& c = h.get(name);
    out += "\nclass " + c.name;
    if (c.parent) out += " extends " + *c.parent;
    out += " {\n  invariant: " + to_string(c.invariant) + ";\n";
    for (const auto& [m, spec] : c.methods) {
      out += "  method " + m + " {\n";
      out += "    pre: " + to_string(spec.pre) + ";\n";
      out += "    post: " + to_string(spec.post) + ";\n";
      out += "  }\n";
    }
    out += "}\n";
  }
  return out;
}

}  // namespace bsv

#endif  // BSV_DSL_HPP
