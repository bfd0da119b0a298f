#include <cctype>

#include "symrep/ctl.hpp"

namespace symrep {

namespace {

// Recursive descent over: or := and ('|' and)*, and := unary ('&' unary)*,
// unary := ('!'|'AX'|'EX'|'AF'|'EF'|'AG'|'EG') unary | atom,
// atom := 'true' | 'false' | ident | '(' or ')' | ('A'|'E') '[' or ('R'|'U') or ']'.
// U/F/G forms are rewritten on the spot:
//   A[p U q] = !E[!p R !q]   E[p U q] = !A[!p R !q]
//   AF p = A[true U p]  EF p = E[true U p]  AG p = A[false R p]  EG p = E[false R p]
struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    throw CtlParseError(msg + " at position " + std::to_string(at), at);
  }

  bool peek_char(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }

  bool eat_char(char c) {
    if (peek_char(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect_char(char c) {
    if (!eat_char(c)) fail(std::string("expected '") + c + "'", pos);
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string peek_word() {
    skip_ws();
    if (pos >= text.size() || !ident_start(text[pos])) return {};
    std::size_t e = pos;
    while (e < text.size() && ident_char(text[e])) ++e;
    return text.substr(pos, e - pos);
  }

  std::string take_word() {
    auto w = peek_word();
    pos += w.size();
    return w;
  }

  static bool is_keyword(const std::string& w) {
    return w == "true" || w == "false" || w == "A" || w == "E" || w == "R" || w == "U" ||
           w == "AX" || w == "EX" || w == "AF" || w == "EF" || w == "AG" || w == "EG";
  }

  CtlPtr parse_or() {
    auto lhs = parse_and();
    while (eat_char('|')) lhs = ctl::or_(lhs, parse_and());
    return lhs;
  }

  CtlPtr parse_and() {
    auto lhs = parse_unary();
    while (eat_char('&')) lhs = ctl::and_(lhs, parse_unary());
    return lhs;
  }

  CtlPtr parse_unary() {
    if (eat_char('!')) return ctl::not_(parse_unary());
    auto w = peek_word();
    if (w == "AX") {
      take_word();
      return ctl::ax(parse_unary());
    }
    if (w == "EX") {
      take_word();
      return ctl::ex(parse_unary());
    }
    if (w == "AF") {
      take_word();
      return make_au(ctl::t(), parse_unary());
    }
    if (w == "EF") {
      take_word();
      return make_eu(ctl::t(), parse_unary());
    }
    if (w == "AG") {
      take_word();
      return ctl::ar(ctl::f(), parse_unary());
    }
    if (w == "EG") {
      take_word();
      return ctl::er(ctl::f(), parse_unary());
    }
    return parse_atom();
  }

  static CtlPtr make_au(CtlPtr a, CtlPtr b) {
    return ctl::not_(ctl::er(ctl::not_(std::move(a)), ctl::not_(std::move(b))));
  }
  static CtlPtr make_eu(CtlPtr a, CtlPtr b) {
    return ctl::not_(ctl::ar(ctl::not_(std::move(a)), ctl::not_(std::move(b))));
  }

  CtlPtr parse_atom() {
    skip_ws();
    std::size_t at = pos;
    if (eat_char('(')) {
      auto inner = parse_or();
      expect_char(')');
      return inner;
    }
    auto w = peek_word();
    if (w.empty()) fail("expected formula", pos);
    if (w == "true") {
      take_word();
      return ctl::t();
    }
    if (w == "false") {
      take_word();
      return ctl::f();
    }
    if (w == "A" || w == "E") {
      take_word();
      expect_char('[');
      auto lhs = parse_or();
      auto sep = take_word();
      if (sep != "R" && sep != "U") fail("expected 'R' or 'U' in path operator", at);
      auto rhs = parse_or();
      expect_char(']');
      if (w == "A") return sep == "R" ? ctl::ar(lhs, rhs) : make_au(lhs, rhs);
      return sep == "R" ? ctl::er(lhs, rhs) : make_eu(lhs, rhs);
    }
    if (is_keyword(w)) fail("keyword '" + w + "' is not a proposition", at);
    take_word();
    return ctl::prop(w);
  }

  CtlPtr run() {
    auto f = parse_or();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input", pos);
    return f;
  }
};

}  // namespace

CtlPtr parse_formula(const std::string& text) { return Parser(text).run(); }

}  // namespace symrep
