#ifndef BSV_PARSER_HPP
#define BSV_PARSER_HPP

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bsv/error.hpp"
#include "bsv/formula.hpp"

namespace bsv {

struct Token {
  enum class Type { Ident, Int, Punct, End };
  Type type = Type::End;
  std::string text;
  std::int64_t number = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Splits source text into identifiers, integer literals and punctuation.
/// `#` starts a comment that runs to the end of the line.
inline std::vector<Token> tokenize(std::string_view src) {
  static constexpr std::string_view kPuncts[] = {
      "<->", "->", "<=", ">=", "==", "!=", "&&", "||", "..", "<", ">", "!",
      "(",   ")",  "{",  "}",  ";",  ":",  ",",  "=",  "[",  "]",
  };
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    const bool negative_literal =
        c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1]));
    if (std::isdigit(static_cast<unsigned char>(c)) || negative_literal) {
      std::size_t j = i + (negative_literal ? 1 : 0);
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.type = Token::Type::Int;
      t.text = std::string(src.substr(i, j - i));
      try {
        t.number = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw Error(ErrorKind::Syntax, "integer literal out of range: " + t.text, line, col);
      }
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.type = Token::Type::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (std::string_view p : kPuncts) {
      if (src.substr(i, p.size()) == p) {
        t.type = Token::Type::Punct;
        t.text = std::string(p);
        advance(p.size());
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", line, col);
    }
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

/// Cursor over a token vector with the assertion-expression grammar:
///
///   iff     := implies ('<->' implies)*        left associative
///   implies := or ('->' implies)?              right associative
///   or      := and ('||' and)*
///   and     := unary ('&&' unary)*
///   unary   := '!' unary | primary
///   primary := true | false | old '(' iff ')' | client '(' NAME ')'
///            | '(' iff ')' | operand [cmp operand]
class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[k];
  }
  bool at_end() const { return peek().type == Token::Type::End; }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == Token::Type::Punct && t.text == p;
  }
  bool is_keyword(std::string_view k) const {
    return peek().type == Token::Type::Ident && peek().text == k;
  }

  const Token& take() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    take();
    return true;
  }

  void expect(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "'");
    take();
  }

  void expect_keyword(std::string_view k) {
    if (!is_keyword(k)) fail("expected '" + std::string(k) + "'");
    take();
  }

  std::string expect_ident(std::string_view what = "identifier") {
    if (peek().type != Token::Type::Ident) fail("expected " + std::string(what));
    return take().text;
  }

  std::int64_t expect_int() {
    if (peek().type != Token::Type::Int) fail("expected integer literal");
    return take().number;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    const std::string found = t.type == Token::Type::End ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorKind::Syntax, msg + ", found " + found, t.line, t.column);
  }

  Formula parse_formula() { return parse_iff(); }

 private:
  Formula parse_iff() {
    Formula lhs = parse_implies();
    while (accept("<->")) lhs = make_iff(lhs, parse_implies());
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept("->")) return make_implies(lhs, parse_implies());
    return lhs;
  }

  Formula parse_or() {
    std::vector<Formula> parts{parse_and()};
    while (accept("||")) parts.push_back(parse_and());
    return make_or(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts{parse_unary()};
    while (accept("&&")) parts.push_back(parse_unary());
    return make_and(std::move(parts));
  }

  Formula parse_unary() {
    if (accept("!")) return make_not(parse_unary());
    return parse_primary();
  }

  static bool cmp_op(const Token& t, CmpOp& op) {
    if (t.type != Token::Type::Punct) return false;
    if (t.text == "<") op = CmpOp::Lt;
    else if (t.text == "<=") op = CmpOp::Le;
    else if (t.text == "==") op = CmpOp::Eq;
    else if (t.text == "!=") op = CmpOp::Ne;
    else if (t.text == ">=") op = CmpOp::Ge;
    else if (t.text == ">") op = CmpOp::Gt;
    else return false;
    return true;
  }

  Formula parse_primary() {
    const Token& t = peek();
    if (accept("(")) {
      Formula inner = parse_iff();
      expect(")");
      return inner;
    }
    if (t.type == Token::Type::Ident) {
      if (t.text == "true" || t.text == "false") {
        take();
        return Formula::constant(t.text == "true");
      }
      if (t.text == "old" && is_punct("(", 1)) {
        const Token at = take();
        take();
        Formula inner = parse_iff();
        expect(")");
        if (inner.contains_old()) {
          throw Error(ErrorKind::Validation, "old() must not be nested", at.line, at.column);
        }
        CmpOp op{};
        if (inner.kind() == Formula::Kind::Atom && cmp_op(peek(), op)) return parse_old_comparison(inner.name(), op);
        return make_old(inner);
      }
      if (t.text == "client" && is_punct("(", 1)) {
        take();
        take();
        std::string cls = expect_ident("class name");
        expect(")");
        return Formula::client(std::move(cls));
      }
      std::string var = take().text;
      CmpOp op{};
      if (cmp_op(peek(), op)) {
        take();
        const Token& rhs = peek();
        if (rhs.type == Token::Type::Int) return Formula::compare(var, op, take().number);
        if (rhs.type == Token::Type::Ident) return Formula::compare(var, op, take().text);
        fail("expected variable or integer after comparison");
      }
      return Formula::atom(std::move(var));
    }
    if (t.type == Token::Type::Int) {
      const std::int64_t lit = take().number;
      CmpOp op{};
      if (!cmp_op(peek(), op)) fail("integer literal must be compared with a variable");
      take();
      std::string var = expect_ident("variable");
      return Formula::compare(std::move(var), mirror(op), lit);
    }
    fail("expected expression");
  }

  // old(x) OP n and old(x) OP old(y) read as old(x OP n) and old(x OP y).
  // Mixing states in one comparison, as in old(x) < x, has no node to land in.
  Formula parse_old_comparison(std::string var, CmpOp op) {
    take();
    if (peek().type == Token::Type::Int) return make_old(Formula::compare(std::move(var), op, take().number));
    if (is_keyword("old") && is_punct("(", 1)) {
      take();
      take();
      std::string rhs = expect_ident("variable");
      expect(")");
      return make_old(Formula::compare(std::move(var), op, std::move(rhs)));
    }
    fail("old() operand must be compared with an integer or another old() operand");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Parses a complete assertion expression.
inline Formula parse_formula(std::string_view text) {
  TokenCursor cur(tokenize(text));
  Formula f = cur.parse_formula();
  if (!cur.at_end()) cur.fail("unexpected trailing input");
  return f;
}

}  // namespace bsv

#endif  // BSV_PARSER_HPP
