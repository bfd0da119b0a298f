#include <cctype>
#include <sstream>
#include <stdexcept>

#include "symrep/json_io.hpp"
#include "symrep/programs.hpp"

namespace symrep {

namespace {

[[noreturn]] void fail_at(std::size_t lineno, const std::string& msg) {
  throw std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
}

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

// words plus the symbols ( ) { } ! & | = , := -> ; '#' starts a comment
std::vector<std::string> tokenize_line(const std::string& line, std::size_t lineno) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      ++i;
      continue;
    }
    if (word_char(c)) {
      std::size_t j = i;
      while (j < line.size() && word_char(line[j])) ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
      continue;
    }
    if (c == ':' && i + 1 < line.size() && line[i + 1] == '=') {
      out.push_back(":=");
      i += 2;
      continue;
    }
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back("->");
      i += 2;
      continue;
    }
    if (c == '(' || c == ')' || c == '{' || c == '}' || c == '!' || c == '&' || c == '|' ||
        c == '=' || c == ',' || c == ':') {
      out.push_back(std::string(1, c));
      ++i;
      continue;
    }
    fail_at(lineno, std::string("unexpected character '") + c + "'");
  }
  return out;
}

bool is_word(const std::string& t) { return !t.empty() && word_char(t[0]); }

struct GuardParser {
  const std::vector<std::string>& t;
  std::size_t pos, end;
  std::size_t lineno;

  [[noreturn]] void fail(const std::string& msg) const { fail_at(lineno, msg); }
  bool peek(const char* s) const { return pos < end && t[pos] == s; }
  bool eat(const char* s) {
    if (!peek(s)) return false;
    ++pos;
    return true;
  }

  GuardPtr parse_or() {
    GuardPtr a = parse_and();
    while (eat("|")) a = guard::or_(a, parse_and());
    return a;
  }
  GuardPtr parse_and() {
    GuardPtr a = parse_unary();
    while (eat("&")) a = guard::and_(a, parse_unary());
    return a;
  }
  GuardPtr parse_unary() {
    if (eat("!")) return guard::not_(parse_unary());
    return parse_primary();
  }
  GuardPtr parse_primary() {
    if (eat("(")) {
      GuardPtr a = parse_or();
      if (!eat(")")) fail("expected ')' in guard");
      return a;
    }
    if (pos >= end || !is_word(t[pos])) fail("expected a guard atom");
    const std::string w = t[pos++];
    if (w == "true") return guard::t();
    if (w == "false") return guard::f();
    if (eat("=")) {
      if (pos >= end || !is_word(t[pos])) fail("expected a value after '='");
      return guard::eq(w, t[pos++]);
    }
    return guard::prop(w);
  }
};

}  // namespace

ConcurrentProgram parse_program(const std::string& text) {
  ConcurrentProgram p;
  Process* cur = nullptr;
  bool seen_process = false;

  std::istringstream ss(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto t = tokenize_line(line, lineno);
    if (t.empty()) continue;
    const std::string& head = t[0];

    if (head == "shared") {
      if (seen_process) fail_at(lineno, "shared declarations must precede processes");
      if (t.size() < 6 || t[2] != ":")
        fail_at(lineno, "expected 'shared <name> : <values> = <initial>'");
      SharedVarDecl sv;
      sv.name = t[1];
      std::size_t i = 3;
      while (i < t.size() && t[i] != "=") sv.values.push_back(t[i++]);
      if (i + 2 != t.size()) fail_at(lineno, "expected '= <initial>' at the end");
      sv.init = t[i + 1];
      p.shared.push_back(std::move(sv));
    } else if (head == "process") {
      if (t.size() != 2) fail_at(lineno, "expected 'process <index>'");
      seen_process = true;
      const std::string want = std::to_string(p.processes.size() + 1);
      if (t[1] != want)
        fail_at(lineno, "expected 'process " + want + "' (processes are numbered in order)");
      p.processes.emplace_back();
      cur = &p.processes.back();
    } else if (head == "local") {
      if (cur == nullptr) fail_at(lineno, "'local' outside a process");
      if (t.size() < 4 || t[2] != "{" || t.back() != "}")
        fail_at(lineno, "expected 'local <name> { <props> }'");
      LocalState l;
      l.name = t[1];
      for (std::size_t i = 3; i + 1 < t.size(); ++i) {
        if (!is_word(t[i])) fail_at(lineno, "expected a proposition name");
        l.props.push_back(t[i]);
      }
      cur->locals.push_back(std::move(l));
    } else if (head == "init") {
      if (cur == nullptr) fail_at(lineno, "'init' outside a process");
      if (t.size() != 2) fail_at(lineno, "expected 'init <local>'");
      cur->initial_local = t[1];
    } else if (head == "action") {
      if (cur == nullptr) fail_at(lineno, "'action' outside a process");
      if (t.size() < 6 || t[2] != "->" || t[4] != "when")
        fail_at(lineno, "expected 'action <from> -> <to> when <guard> [do <assignments>]'");
      Action a;
      a.from = t[1];
      a.to = t[3];
      std::size_t g_end = t.size();
      for (std::size_t i = 5; i < t.size(); ++i)
        if (t[i] == "do") {
          g_end = i;
          break;
        }
      GuardParser gp{t, 5, g_end, lineno};
      a.guard = gp.parse_or();
      if (gp.pos != g_end) fail_at(lineno, "unexpected token in guard: '" + t[gp.pos] + "'");
      if (g_end < t.size()) {
        std::size_t i = g_end + 1;
        if (i >= t.size()) fail_at(lineno, "'do' without assignments");
        while (true) {
          if (i + 3 > t.size() || t[i + 1] != ":=")
            fail_at(lineno, "expected '<variable> := <value>'");
          a.assigns.emplace_back(t[i], t[i + 2]);
          i += 3;
          if (i == t.size()) break;
          if (t[i] != ",") fail_at(lineno, "expected ',' between assignments");
          ++i;
        }
      }
      cur->actions.push_back(std::move(a));
    } else {
      fail_at(lineno, "unknown directive '" + head + "'");
    }
  }

  const auto rep = validate_program(p);
  if (!rep.ok()) throw std::runtime_error("invalid program: " + rep.errors.front());
  return p;
}

ConcurrentProgram load_program(const std::string& path) {
  ConcurrentProgram p = parse_program(read_file(path));
  auto slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  p.name = (dot == std::string::npos || dot == 0) ? base : base.substr(0, dot);
  return p;
}

std::string serialize_program(const ConcurrentProgram& p) {
  std::string out;
  for (const auto& sv : p.shared) {
    out += "shared " + sv.name + " :";
    for (const auto& v : sv.values) out += " " + v;
    out += " = " + sv.init + "\n";
  }
  for (std::size_t i = 0; i < p.processes.size(); ++i) {
    const auto& pr = p.processes[i];
    out += "process " + std::to_string(i + 1) + "\n";
    for (const auto& l : pr.locals) {
      out += "  local " + l.name + " {";
      for (const auto& q : l.props) out += " " + q;
      out += " }\n";
    }
    out += "  init " + pr.initial_local + "\n";
    for (const auto& a : pr.actions) {
      out += "  action " + a.from + " -> " + a.to + " when " + to_string(a.guard);
      if (!a.assigns.empty()) {
        out += " do ";
        for (std::size_t j = 0; j < a.assigns.size(); ++j) {
          if (j) out += ", ";
          out += a.assigns[j].first + " := " + a.assigns[j].second;
        }
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace symrep
