#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "symrep/programs.hpp"
#include "symrep/repair.hpp"
#include "test_util.hpp"

using namespace symrep;

namespace {

KripkeStructure ab_chain() {
  return make_structure({"a", "b"}, {"a"}, {"p"},
                        {{"a", {}}, {"b", {"p"}}},
                        {{"a", "b"}, {"b", "b"}});
}

struct MutexSetup {
  ConcurrentProgram p;
  ProgramStructure ps;
  SymmetryGroup g;

  explicit MutexSetup(std::size_t n) : p(make_ntc_mutex_program(n)), ps(global_structure(p)) {
    std::vector<StateMapping> sgens;
    for (const auto& ig : full_index_generators(p))
      sgens.push_back(index_group_action(p, ps, ig));
    g = group_closure(ps.m, sgens);
  }
};

}  // namespace

TEST_CASE("pnf round trip on encoder inputs") {
  auto f = to_pnf(parse_formula("!(AG p | EX !q)"));
  CHECK(is_pnf(f));
  CHECK(!is_pnf(parse_formula("!EX p")));
  CHECK(is_pnf(parse_formula("!p | AX q")));
}

TEST_CASE("encoding exposes keep variables and decodes models") {
  auto m = ab_chain();
  auto enc = encode_repair(m, to_pnf(parse_formula("EF p")));
  REQUIRE(enc.keep_state.size() == 2);
  REQUIRE(enc.keep_trans.size() == 2);
  CHECK(enc.cnf.num_vars > 4);

  auto model = sat_solve(enc.cnf);
  REQUIRE(model.has_value());
  auto n = decode_model(m, enc, *model);
  CHECK(n.parent == &m);
  // whatever the model keeps must already satisfy the formula
  CHECK(models(n, parse_formula("EF p")));
}

TEST_CASE("repair drops exactly what the formula forbids") {
  auto m = ab_chain();

  // AG p requires cutting a, which the kept-initial rule forbids
  CHECK(!repair(m, parse_formula("AG p")).has_value());

  RepairOptions loose;
  loose.require_initial = false;
  auto r = repair(m, parse_formula("AG p"), loose);
  REQUIRE(r.has_value());
  CHECK(r->states == std::vector<StateId>{1});
  CHECK(r->transitions == std::vector<Transition>{{1, 1}});

  // nothing repairs false at a kept initial state
  CHECK(!repair(m, parse_formula("false")).has_value());

  // already-satisfied formulas keep a model intact under maximization
  RepairOptions maxed;
  maxed.maximize_retained = true;
  auto keep = repair(m, parse_formula("AF p"), maxed);
  REQUIRE(keep.has_value());
  CHECK(keep->transitions.size() == 2);
  CHECK(models(*keep, parse_formula("AF p")));
}

TEST_CASE("maximized repair retains the most transitions") {
  // a <-> b plus a self-loop on a; p only at b
  auto m = make_structure({"a", "b"}, {"a"}, {"p"},
                          {{"a", {}}, {"b", {"p"}}},
                          {{"a", "a"}, {"a", "b"}, {"b", "a"}, {"b", "b"}});
  RepairOptions maxed;
  maxed.maximize_retained = true;

  // AF p forces the a self-loop out and nothing else
  auto r = repair(m, parse_formula("AF p"), maxed);
  REQUIRE(r.has_value());
  CHECK(models(*r, parse_formula("AF p")));
  CHECK(r->transitions == std::vector<Transition>{{0, 1}, {1, 0}, {1, 1}});

  // EG !p is satisfied by looping on a, so everything survives
  auto r2 = repair(m, parse_formula("EG !p"), maxed);
  REQUIRE(r2.has_value());
  CHECK(r2->transitions.size() == 4);

  auto b = brute_force_repair(m, parse_formula("AF p"));
  REQUIRE(b.has_value());
  CHECK(b->transitions.size() == r->transitions.size());
}

TEST_CASE("repair emits DIMACS when asked and accepts a custom solver") {
  auto m = ab_chain();
  const std::string path = "repair_test_emit.cnf";
  RepairOptions opts;
  opts.emit_cnf_path = path;
  int calls = 0;
  opts.solver = [&](const CnfInstance& inst) {
    ++calls;
    return sat_solve(inst);
  };
  auto r = repair(m, parse_formula("AF p"), opts);
  REQUIRE(r.has_value());
  CHECK(calls == 1);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("c var", 0) == 0);
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("repair agrees with the enumeration oracle on small structures") {
  std::mt19937 rng(4242);
  const std::vector<CtlPtr> formulas = {
      parse_formula("AG p0"), parse_formula("AF p0"), parse_formula("EG !p0"),
      parse_formula("A[p0 U p1]"), parse_formula("EF (p0 & p1)")};
  RepairOptions maxed;
  maxed.maximize_retained = true;
  for (int round = 0; round < 40; ++round) {
    auto m = testutil::random_structure(rng, 3, 6);
    for (const auto& f : formulas) {
      auto mine = repair(m, f, maxed);
      auto oracle = brute_force_repair(m, f);
      CAPTURE(round);
      CAPTURE(to_string(f));
      REQUIRE(mine.has_value() == oracle.has_value());
      if (mine) {
        CHECK(models(*mine, f));
        CHECK(!mine->derived_initial().empty());
        CHECK(models(*oracle, f));
      }
    }
  }
}

TEST_CASE("quotient repair of 2-process mutual exclusion") {
  MutexSetup mx(2);
  auto f = parse_formula("AG !(c1 & c2)");
  CHECK(!models(mx.ps.m, f));
  REQUIRE(is_g_invariant(mx.ps.m, mx.g, f));

  auto theta = canonical_representative_map(mx.g);
  auto qr = repair_via_quotient(mx.ps.m, mx.g, theta, f);
  REQUIRE(qr.has_value());

  CHECK(models(qr->lifted, f));
  CHECK(is_g_closed(qr->lifted, mx.g));
  CHECK(is_g_maximal(qr->lifted, *qr->q));
  CHECK(quotient_substructure(qr->lifted, *qr->q) == qr->quotient_repair);

  // the critical pair is gone along with nothing unreachable left behind
  auto cc = mx.ps.m.state_by_name("C,C");
  REQUIRE(cc.has_value());
  CHECK(!qr->lifted.contains_state(*cc));
  auto reach = reachable_part(qr->lifted);
  CHECK(reach == qr->lifted);
  CHECK(qr->lifted.states.size() == 8);

  // maximized variant also models the formula and keeps a G-maximal result
  RepairOptions maxed;
  maxed.maximize_retained = true;
  auto qr2 = repair_via_quotient(mx.ps.m, mx.g, theta, f, maxed);
  REQUIRE(qr2.has_value());
  CHECK(models(qr2->lifted, f));
  CHECK(is_g_maximal(qr2->lifted, *qr2->q));
  CHECK(!qr2->lifted.contains_state(*cc));
}

TEST_CASE("quotient repair rejects non-invariant formulas") {
  MutexSetup mx(2);
  auto theta = canonical_representative_map(mx.g);
  CHECK_THROWS_AS(repair_via_quotient(mx.ps.m, mx.g, theta, parse_formula("AG !c1")),
                  std::invalid_argument);
}

TEST_CASE("quotient repair witnesses are repairs of the full structure") {
  std::mt19937 rng(909);
  int solved = 0;
  for (int round = 0; round < 25; ++round) {
    auto inst = testutil::random_symmetric_structure(rng);
    auto g = group_closure(inst.m, {inst.swap});
    auto theta = canonical_representative_map(g);
    CtlPtr f;
    for (;;) {
      f = testutil::random_formula(rng, {"p0", "p1"}, 3);
      if (is_g_invariant(inst.m, g, f)) break;
    }
    auto qr = repair_via_quotient(inst.m, g, theta, f);
    auto direct = repair(inst.m, f);
    if (qr) {
      ++solved;
      CHECK(models(qr->lifted, f));
      CHECK(!qr->lifted.derived_initial().empty());
      CHECK(is_g_closed(qr->lifted, g));
      // soundness: a symmetric repair is in particular a repair
      CHECK(direct.has_value());
    }
  }
  CHECK(solved > 0);
}
