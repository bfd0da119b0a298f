#include "doctest.h"

#include <algorithm>
#include <functional>

#include "symrep/ctl.hpp"
#include "symrep/repair.hpp"
#include "test_util.hpp"

using namespace symrep;

namespace {

KripkeStructure ab_chain() {
  // a -> b, b -> b; p only at b
  return make_structure({"a", "b"}, {"a"}, {"p"},
                        {{"a", {}}, {"b", {"p"}}},
                        {{"a", "b"}, {"b", "b"}});
}

// ---------------------------------------------------------------------------
// independent references for the path operators, recursive over the formula

using Bits = std::vector<bool>;

Bits ref_check(const KripkeView& v, const CtlPtr& f);

// E[p R q]: some path keeps q up to and including the first p-state, or
// forever. Decided by reachability inside the q-region plus cycle detection.
Bits ref_er(const KripkeView& v, const Bits& p, const Bits& q) {
  const std::size_t n = v.size();
  Bits out(n, false);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (!q[s]) continue;
    // q-states reachable from s without leaving the q-region
    Bits in(n, false);
    std::vector<std::uint32_t> stack{s};
    in[s] = true;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto t : v.succ[u])
        if (q[t] && !in[t]) {
          in[t] = true;
          stack.push_back(t);
        }
    }
    bool good = false;
    for (std::uint32_t t = 0; t < n && !good; ++t)
      if (in[t] && p[t]) good = true;
    if (!good) {
      // any cycle inside the region gives an infinite q-path
      Bits alive = in;
      bool changed = true;
      while (changed && !good) {
        changed = false;
        for (std::uint32_t t = 0; t < n; ++t) {
          if (!alive[t]) continue;
          bool has_succ = false;
          for (auto w : v.succ[t]) has_succ = has_succ || alive[w];
          if (!has_succ) {
            alive[t] = false;
            changed = true;
          }
        }
      }
      good = alive[s];
    }
    out[s] = good;
  }
  return out;
}

// A[p R q] fails exactly when some finite prefix runs through not-p states
// and ends in a not-q state.
Bits ref_ar(const KripkeView& v, const Bits& p, const Bits& q) {
  const std::size_t n = v.size();
  Bits out(n, false);
  for (std::uint32_t s = 0; s < n; ++s) {
    Bits seen(n, false);
    std::vector<std::uint32_t> stack{s};
    seen[s] = true;
    bool violated = false;
    while (!stack.empty() && !violated) {
      auto u = stack.back();
      stack.pop_back();
      if (!q[u]) {
        violated = true;
        break;
      }
      if (p[u]) continue;  // the release fired; deeper positions are safe
      for (auto t : v.succ[u])
        if (!seen[t]) {
          seen[t] = true;
          stack.push_back(t);
        }
    }
    out[s] = !violated;
  }
  return out;
}

Bits ref_check(const KripkeView& v, const CtlPtr& f) {
  const std::size_t n = v.size();
  switch (f->kind) {
    case CtlKind::True: return Bits(n, true);
    case CtlKind::False: return Bits(n, false);
    case CtlKind::Prop: {
      Bits out(n, false);
      auto pi = v.base->ap_index(f->prop);
      REQUIRE(pi.has_value());
      for (std::uint32_t s = 0; s < n; ++s) out[s] = v.label(s, *pi);
      return out;
    }
    case CtlKind::Not: {
      auto a = ref_check(v, f->lhs);
      a.flip();
      return a;
    }
    case CtlKind::And: {
      auto a = ref_check(v, f->lhs), b = ref_check(v, f->rhs);
      for (std::size_t i = 0; i < n; ++i) a[i] = a[i] && b[i];
      return a;
    }
    case CtlKind::Or: {
      auto a = ref_check(v, f->lhs), b = ref_check(v, f->rhs);
      for (std::size_t i = 0; i < n; ++i) a[i] = a[i] || b[i];
      return a;
    }
    case CtlKind::AX: {
      auto a = ref_check(v, f->lhs);
      Bits out(n, false);
      for (std::uint32_t s = 0; s < n; ++s) {
        bool all = true;
        for (auto t : v.succ[s]) all = all && a[t];
        out[s] = all;  // vacuously true on dead states (views can have them)
      }
      return out;
    }
    case CtlKind::EX: {
      auto a = ref_check(v, f->lhs);
      Bits out(n, false);
      for (std::uint32_t s = 0; s < n; ++s)
        for (auto t : v.succ[s]) out[s] = out[s] || a[t];
      return out;
    }
    case CtlKind::AR: return ref_ar(v, ref_check(v, f->lhs), ref_check(v, f->rhs));
    case CtlKind::ER: return ref_er(v, ref_check(v, f->lhs), ref_check(v, f->rhs));
    case CtlKind::AU: {
      // dual of the path-based ER
      auto np = ref_check(v, ctl::not_(f->lhs));
      auto nq = ref_check(v, ctl::not_(f->rhs));
      auto e = ref_er(v, np, nq);
      e.flip();
      return e;
    }
    case CtlKind::EU: {
      auto np = ref_check(v, ctl::not_(f->lhs));
      auto nq = ref_check(v, ctl::not_(f->rhs));
      auto a = ref_ar(v, np, nq);
      a.flip();
      return a;
    }
  }
  return Bits(n, false);
}

// third opinion for E[p R q] on tiny views: enumerate explicit paths; a
// depth-(2n+1) all-q path must revisit a state, i.e. witnesses an all-q lasso
bool lasso_er(const KripkeView& v, const Bits& p, const Bits& q, std::uint32_t s) {
  const std::size_t depth = 2 * v.size() + 1;
  std::function<bool(std::uint32_t, std::size_t)> walk =
      [&](std::uint32_t u, std::size_t len) -> bool {
    if (!q[u]) return false;
    if (p[u]) return true;
    if (len == depth) return true;  // all-q path this long implies a q-cycle
    for (auto t : v.succ[u])
      if (walk(t, len + 1)) return true;
    return false;
  };
  return walk(s, 0);
}

}  // namespace

TEST_CASE("parser handles precedence, sugar, and errors") {
  CHECK(to_string(parse_formula("a & b | c & !d")) == "a & b | c & !d");
  CHECK(to_string(parse_formula("(a | b) & c")) == "(a | b) & c");
  CHECK(to_string(parse_formula("AG p")) == "A[false R p]");
  CHECK(to_string(parse_formula("EG p")) == "E[false R p]");
  CHECK(to_string(parse_formula("AF p")) == "!E[!true R !p]");
  CHECK(to_string(parse_formula("EF p")) == "!A[!true R !p]");
  CHECK(to_string(parse_formula("A[p U q]")) == "!E[!p R !q]");
  CHECK(to_string(parse_formula("E[p R q]")) == "E[p R q]");
  CHECK(to_string(parse_formula("AX EX p")) == "AX EX p");
  CHECK(ctl_equal(parse_formula(" AG  p "), parse_formula("A[false R p]")));
  CHECK(!ctl_equal(parse_formula("AG p"), parse_formula("EG p")));

  CHECK_THROWS_AS(parse_formula(""), CtlParseError);
  CHECK_THROWS_AS(parse_formula("A[p U q"), CtlParseError);
  CHECK_THROWS_AS(parse_formula("AX"), CtlParseError);
  CHECK_THROWS_AS(parse_formula("p q"), CtlParseError);
  CHECK_THROWS_AS(parse_formula("A[p W q]"), CtlParseError);
  CHECK_THROWS_AS(parse_formula("AG AG"), CtlParseError);
  CHECK_THROWS_AS(parse_formula("R"), CtlParseError);
  CHECK_THROWS_AS(parse_formula("p & U"), CtlParseError);
  try {
    parse_formula("p & ");
    FAIL("expected a parse error");
  } catch (const CtlParseError& e) {
    CHECK(e.position == 4);
  }
}

TEST_CASE("round-trip through to_string parses back to an equal formula") {
  std::mt19937 rng(23);
  const std::vector<std::string> props{"p0", "p1"};
  for (int i = 0; i < 200; ++i) {
    auto f = testutil::random_formula(rng, props, 3);
    auto g = parse_formula(to_string(f));
    // AU/EU print as sugar, which re-parses to the dual encoding; compare
    // semantics instead of syntax
    auto m = testutil::random_structure(rng, 3, 6);
    auto v = view_of(m);
    CHECK(ref_check(v, f) == ref_check(v, g));
  }
}

TEST_CASE("checker matches hand-computed verdicts") {
  auto m = ab_chain();
  auto holds = [&](const char* text, const char* state) {
    return check(m, parse_formula(text)).holds_at(*m.state_by_name(state));
  };
  CHECK(holds("EX p", "a"));
  CHECK(holds("AX p", "a"));
  CHECK(!holds("p", "a"));
  CHECK(holds("AF p", "a"));
  CHECK(!holds("AG p", "a"));
  CHECK(holds("AG p", "b"));
  CHECK(!holds("EG !p", "a"));
  CHECK(holds("E[!p U p]", "a"));
  CHECK(holds("A[!p U p]", "a"));
  CHECK(holds("E[p R true]", "a"));
  CHECK(!holds("E[false R !p]", "a"));

  CHECK(models(m, parse_formula("AF p")));
  CHECK(!models(m, parse_formula("p")));
  CHECK_THROWS_AS(check(m, parse_formula("nosuch")), std::invalid_argument);
}

TEST_CASE("models is vacuously true without derived initial states") {
  auto m = ab_chain();
  SubStructure n;
  n.parent = &m;
  n.states = {1};
  n.transitions = {{1, 1}};
  bool vac = false;
  CHECK(models(n, parse_formula("false"), &vac));
  CHECK(vac);
  CHECK(models(m, parse_formula("AF p"), &vac));
  CHECK(!vac);
}

TEST_CASE("checker agrees with path-based references exhaustively on 2 states") {
  // all total 2-state digraphs: nonempty successor rows
  const std::vector<std::vector<StateId>> rows{{0}, {1}, {0, 1}};
  const std::vector<const char*> operand_texts{"p", "!p", "true", "false"};
  for (const auto& row_a : rows)
    for (const auto& row_b : rows)
      for (int lab = 0; lab < 4; ++lab) {
        std::vector<std::pair<std::string, std::vector<std::string>>> labels{
            {"a", {}}, {"b", {}}};
        if (lab & 1) labels[0].second.push_back("p");
        if (lab & 2) labels[1].second.push_back("p");
        std::vector<std::pair<std::string, std::string>> trans;
        for (StateId t : row_a) trans.push_back({"a", t == 0 ? "a" : "b"});
        for (StateId t : row_b) trans.push_back({"b", t == 0 ? "a" : "b"});
        auto m = make_structure({"a", "b"}, {"a"}, {"p"}, labels, trans);
        auto v = view_of(m);

        for (const char* lt : operand_texts)
          for (const char* rt : operand_texts) {
            auto p = ref_check(v, parse_formula(lt));
            auto q = ref_check(v, parse_formula(rt));
            auto er = ctl::er(parse_formula(lt), parse_formula(rt));
            auto ar = ctl::ar(parse_formula(lt), parse_formula(rt));
            auto er_sat = check(v, er);
            auto ar_sat = check(v, ar);
            for (std::uint32_t s = 0; s < v.size(); ++s) {
              CAPTURE(to_string(er));
              CHECK(er_sat.holds_at(v.states[s]) == ref_er(v, p, q)[s]);
              CHECK(er_sat.holds_at(v.states[s]) == lasso_er(v, p, q, s));
              CHECK(ar_sat.holds_at(v.states[s]) == ref_ar(v, p, q)[s]);
            }
          }
      }
}

TEST_CASE("checker agrees with the recursive reference on random instances") {
  std::mt19937 rng(101);
  const std::vector<std::string> props{"p0", "p1"};
  for (int round = 0; round < 150; ++round) {
    auto m = testutil::random_structure(rng, 3, 6);
    auto v = view_of(m);
    auto f = testutil::random_formula(rng, props, 3);
    auto sat = check(v, f);
    auto ref = ref_check(v, f);
    for (std::uint32_t s = 0; s < v.size(); ++s) {
      CAPTURE(to_string(f));
      CHECK(sat.holds_at(v.states[s]) == ref[s]);
    }
  }
}

TEST_CASE("positive normal form preserves semantics and removes negation") {
  std::mt19937 rng(303);
  const std::vector<std::string> props{"p0", "p1"};
  for (int round = 0; round < 200; ++round) {
    auto f = testutil::random_formula(rng, props, 4);
    auto g = to_pnf(f);
    CHECK(is_pnf(g));
    auto m = testutil::random_structure(rng, 3, 6);
    auto v = view_of(m);
    auto a = check(v, f);
    auto b = check(v, g);
    for (std::uint32_t s = 0; s < v.size(); ++s)
      CHECK(a.holds_at(v.states[s]) == b.holds_at(v.states[s]));
  }

  CHECK(ctl_equal(to_pnf(parse_formula("!AG p")),
                  ctl::eu(ctl::t(), ctl::not_(ctl::prop("p")))));
  CHECK(ctl_equal(to_pnf(parse_formula("!A[p U q]")),
                  ctl::er(ctl::not_(ctl::prop("p")), ctl::not_(ctl::prop("q")))));
  CHECK(ctl_equal(to_pnf(parse_formula("!!p")), ctl::prop("p")));
  CHECK(!is_pnf(parse_formula("!AX p")));
  CHECK(is_pnf(parse_formula("!p & AX p")));
}

TEST_CASE("propositional helpers") {
  auto f = parse_formula("AG !(c1 & c2)");
  auto sub = max_prop_subformulae(f);
  REQUIRE(sub.size() == 2);  // the release constant and the body
  CHECK(to_string(sub[0]) == "false");
  CHECK(to_string(sub[1]) == "!(c1 & c2)");
  for (const auto& g : sub) CHECK(is_propositional(g));

  auto props = propositions_of(parse_formula("a & AX (b | !a)"));
  CHECK(props == std::vector<std::string>{"a", "b"});
  CHECK(is_propositional(parse_formula("a & !b | true")));
  CHECK(!is_propositional(parse_formula("EX a")));
}
