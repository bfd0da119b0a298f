#include "doctest.h"

#include <algorithm>

#include "symrep/programs.hpp"
#include "symrep/symmetry.hpp"
#include "test_util.hpp"

using namespace symrep;

namespace {

// complete bipartite 2+2, both top states initial, no propositions
KripkeStructure box() {
  return make_structure(
      {"s1", "s2", "t1", "t2"}, {"s1", "s2"}, {},
      {{"s1", {}}, {"s2", {}}, {"t1", {}}, {"t2", {}}},
      {{"s1", "t1"}, {"s1", "t2"}, {"s2", "t1"}, {"s2", "t2"},
       {"t1", "s1"}, {"t1", "s2"}, {"t2", "s1"}, {"t2", "s2"}});
}

StateMapping box_swap() { return StateMapping{{1, 0, 3, 2}}; }

// 3-clique with self-loops, fully symmetric
KripkeStructure triangle() {
  std::vector<std::pair<std::string, std::string>> trans;
  const std::vector<std::string> ns{"a", "b", "c"};
  for (const auto& x : ns)
    for (const auto& y : ns) trans.push_back({x, y});
  return make_structure(ns, ns, {}, {{"a", {}}, {"b", {}}, {"c", {}}}, trans);
}

bool substructure_subset(const SubStructure& a, const SubStructure& b) {
  return std::includes(b.states.begin(), b.states.end(), a.states.begin(), a.states.end()) &&
         std::includes(b.transitions.begin(), b.transitions.end(), a.transitions.begin(),
                       a.transitions.end());
}

}  // namespace

TEST_CASE("state mapping algebra") {
  auto id = identity_mapping(4);
  auto g = box_swap();
  CHECK(compose(g, g) == id);
  CHECK(inverse(g) == g);
  CHECK(compose(g, id) == g);
  CHECK(compose(id, g) == g);

  StateMapping rot{{1, 2, 0}};
  CHECK(compose(rot, inverse(rot)) == identity_mapping(3));
  CHECK(inverse(rot) == StateMapping{{2, 0, 1}});
  // f after g
  StateMapping f{{0, 2, 1}};
  CHECK(compose(f, rot).map == std::vector<StateId>{2, 1, 0});
}

TEST_CASE("is_state_mapping checks bijectivity, initial set, and transitions") {
  auto m = box();
  CHECK(is_state_mapping(m, box_swap()));
  CHECK(is_state_mapping(m, identity_mapping(4)));
  CHECK(is_state_mapping(m, StateMapping{{1, 0, 2, 3}}));  // bipartite: layer perms fine
  CHECK(!is_state_mapping(m, StateMapping{{0, 0, 2, 2}}));  // not a bijection
  CHECK(!is_state_mapping(m, StateMapping{{2, 3, 0, 1}}));  // moves the initial set

  // y -> x missing, so the swap breaks transition preservation
  auto asym = make_structure({"x", "y"}, {"x", "y"}, {},
                             {{"x", {}}, {"y", {}}},
                             {{"x", "x"}, {"x", "y"}, {"y", "y"}});
  CHECK(!is_state_mapping(asym, StateMapping{{1, 0}}));
  CHECK(is_state_mapping(asym, identity_mapping(2)));
}

TEST_CASE("group closure reaches the generated group and respects the bound") {
  auto m = box();
  auto g = group_closure(m, {box_swap()});
  CHECK(g.order() == 2);
  CHECK(g.carrier == &m);
  CHECK(g.elements[0] == identity_mapping(4));
  CHECK(g.elements[1] == box_swap());

  auto tri = triangle();
  auto s3 = group_closure(tri, {StateMapping{{1, 0, 2}}, StateMapping{{0, 2, 1}}});
  CHECK(s3.order() == 6);
  // closed under composition
  for (const auto& a : s3.elements)
    for (const auto& b : s3.elements) {
      auto c = compose(a, b);
      CHECK(std::find(s3.elements.begin(), s3.elements.end(), c) != s3.elements.end());
    }

  CHECK_THROWS_AS(group_closure(tri, {StateMapping{{1, 0, 2}}, StateMapping{{0, 2, 1}}}, 3),
                  std::invalid_argument);
  // layer swap moves the initial set, so it is rejected as a generator
  CHECK_THROWS_AS(group_closure(m, {StateMapping{{2, 3, 0, 1}}}), std::invalid_argument);
}

TEST_CASE("orbits are sorted and ordered by minimum member") {
  auto m = box();
  auto g = group_closure(m, {box_swap()});
  auto os = orbits(g);
  REQUIRE(os.size() == 2);
  CHECK(os[0] == std::vector<StateId>{0, 1});
  CHECK(os[1] == std::vector<StateId>{2, 3});

  auto tri = triangle();
  auto g2 = group_closure(tri, {StateMapping{{1, 0, 2}}});
  auto os2 = orbits(g2);
  REQUIRE(os2.size() == 2);
  CHECK(os2[0] == std::vector<StateId>{0, 1});
  CHECK(os2[1] == std::vector<StateId>{2});
}

TEST_CASE("representative maps validate against the orbit partition") {
  auto m = box();
  auto g = group_closure(m, {box_swap()});

  auto canon = canonical_representative_map(g);
  CHECK(canon.theta == std::vector<StateId>{0, 0, 2, 2});
  CHECK(validate_representative_map(g, canon).ok());

  RepresentativeMap maxmap{{1, 1, 3, 3}};
  CHECK(validate_representative_map(g, maxmap).ok());

  // splits the t-orbit
  CHECK(!validate_representative_map(g, RepresentativeMap{{0, 0, 2, 3}}).ok());
  // merges the two orbits
  CHECK(!validate_representative_map(g, RepresentativeMap{{0, 0, 0, 0}}).ok());
  // representative outside its own orbit
  CHECK(!validate_representative_map(g, RepresentativeMap{{2, 2, 0, 0}}).ok());
}

TEST_CASE("quotient collapses orbits and is a G-bisimulation") {
  auto m = box();
  auto g = group_closure(m, {box_swap()});
  auto q = quotient(m, g);

  CHECK(q.source == &m);
  REQUIRE(q.quotient.num_states() == 2);
  CHECK(q.quotient.names == std::vector<std::string>{"s1", "t1"});
  CHECK(q.quotient.initial == std::vector<StateId>{0});
  CHECK(q.quotient.transitions == std::vector<Transition>{{0, 1}, {1, 0}});
  CHECK(q.rep_states == std::vector<StateId>{0, 2});
  for (StateId s : {0u, 1u}) CHECK(q.quotient_id(s) == 0);
  for (StateId s : {2u, 3u}) CHECK(q.quotient_id(s) == 1);

  CHECK(check_g_bisimulation(view_of(m), view_of(q.quotient), q, g).ok());

  auto qmax = quotient(m, g, RepresentativeMap{{1, 1, 3, 3}});
  CHECK(qmax.quotient.names == std::vector<std::string>{"s2", "t2"});
  CHECK(qmax.quotient.transitions == std::vector<Transition>{{0, 1}, {1, 0}});
  CHECK(check_g_bisimulation(view_of(m), view_of(qmax.quotient), qmax, g).ok());

  auto other = box();
  CHECK_THROWS_AS(quotient(other, g), std::invalid_argument);
}

TEST_CASE("tampered quotients fail the right bisimulation direction") {
  auto m = box();
  auto g = group_closure(m, {box_swap()});

  {
    auto q = quotient(m, g);
    q.quotient.transitions = {{0, 1}};  // drop the way back up
    q.quotient.finalize();
    auto rep = check_g_bisimulation(view_of(m), view_of(q.quotient), q, g);
    CHECK(!rep.forward);
    CHECK(rep.backward);
    CHECK(rep.pairs_valid);
    CHECK(rep.initial_covered);
    CHECK(!rep.ok());
  }
  {
    auto q = quotient(m, g);
    q.quotient.transitions = {{0, 0}, {0, 1}, {1, 0}};  // spurious self-loop
    q.quotient.finalize();
    auto rep = check_g_bisimulation(view_of(m), view_of(q.quotient), q, g);
    CHECK(rep.forward);
    CHECK(!rep.backward);
    CHECK(!rep.ok());
  }
  {
    // empty relation leaves the initial states unmatched
    auto q = quotient(m, g);
    auto rep = check_g_bisimulation(
        view_of(m), view_of(q.quotient), {},
        [](std::uint32_t) { return std::optional<std::uint32_t>{}; },
        [](std::uint32_t, std::uint32_t) { return true; });
    CHECK(!rep.initial_covered);
    CHECK(rep.forward);
    CHECK(rep.backward);
  }
}

TEST_CASE("G-closed substructures are unions of orbits") {
  auto m = box();
  auto g = group_closure(m, {box_swap()});

  SubStructure closed;
  closed.parent = &m;
  closed.states = {0, 1, 2, 3};
  closed.transitions = {{0, 2}, {1, 3}, {2, 0}, {3, 1}};
  CHECK(is_g_closed(closed, g));

  SubStructure half = closed;
  half.transitions = {{0, 2}, {2, 0}};  // misses the swapped copies
  CHECK(!is_g_closed(half, g));

  SubStructure skew = closed;
  skew.states = {0, 2, 3};
  CHECK(!is_g_closed(skew, g));
}

TEST_CASE("lifts form a Galois correspondence with the quotient map") {
  auto p = make_ntc_mutex_program(2);
  auto ps = global_structure(p);
  REQUIRE(ps.m.num_states() == 9);

  std::vector<StateMapping> sgens;
  for (const auto& ig : full_index_generators(p))
    sgens.push_back(index_group_action(p, ps, ig));
  auto g = group_closure(ps.m, sgens);
  CHECK(g.order() == 2);

  auto q = quotient(ps.m, g);
  REQUIRE(q.quotient.num_states() == 6);
  REQUIRE(q.quotient.transitions.size() == 9);
  CHECK(check_g_bisimulation(view_of(ps.m), view_of(q.quotient), q, g).ok());

  // quotient labels come from the representatives
  auto qs = q.quotient.state_by_name("N,T");
  REQUIRE(qs.has_value());
  CHECK(q.quotient.labels[*qs][*q.quotient.ap_index("n1")]);
  CHECK(q.quotient.labels[*qs][*q.quotient.ap_index("t2")]);
  CHECK(!q.quotient.labels[*qs][*q.quotient.ap_index("n2")]);

  auto all_nbar = enumerate_substructures(q.quotient);
  CHECK(all_nbar.size() > 2);

  for (const auto& nbar : all_nbar) {
    auto up = lift_maximal(nbar, q);
    CHECK(is_g_closed(up, g));
    CHECK(is_g_maximal(up, q));
    CHECK(quotient_substructure(up, q) == nbar);

    auto low = lift_minimal(nbar, q, g);
    CHECK(is_g_closed(low, g));
    CHECK(substructure_subset(low, up));
    CHECK(quotient_substructure(low, q) == nbar);

    // round trip from below: lifting the image of a G-closed n recovers at
    // least n
    CHECK(substructure_subset(low, lift_maximal(quotient_substructure(low, q), q)));
  }

  // lift_maximal is a lattice homomorphism
  for (std::size_t i = 0; i < all_nbar.size(); i += 7)
    for (std::size_t j = 0; j < all_nbar.size(); j += 7) {
      const auto &a = all_nbar[i], &b = all_nbar[j];
      CHECK(lift_maximal(join(a, b), q) == join(lift_maximal(a, q), lift_maximal(b, q)));
      CHECK(lift_maximal(meet(a, b), q) == meet(lift_maximal(a, q), lift_maximal(b, q)));
    }

  SubStructure wrong;
  wrong.parent = &ps.m;
  CHECK_THROWS_AS(lift_maximal(wrong, q), std::invalid_argument);
}

TEST_CASE("formula invariance tracks orbit-constancy of propositional parts") {
  auto p2 = make_ntc_mutex_program(2);
  auto ps2 = global_structure(p2);
  std::vector<StateMapping> sg2;
  for (const auto& ig : full_index_generators(p2))
    sg2.push_back(index_group_action(p2, ps2, ig));
  auto g2 = group_closure(ps2.m, sg2);

  CHECK(is_g_invariant(ps2.m, g2, parse_formula("AG !(c1 & c2)")));
  CHECK(is_g_invariant(ps2.m, g2, parse_formula("EF (c1 & c2)")));
  CHECK(!is_g_invariant(ps2.m, g2, parse_formula("AG !c1")));
  CHECK(!is_g_invariant(ps2.m, g2, parse_formula("EF t2")));
  CHECK(is_g_invariant(ps2.m, g2, parse_formula("AG (n1 | t1 | c1) | AG (n2 | t2 | c2)")));

  auto p3 = make_ntc_mutex_program(3);
  auto ps3 = global_structure(p3);
  std::vector<StateMapping> sg3;
  for (const auto& ig : full_index_generators(p3))
    sg3.push_back(index_group_action(p3, ps3, ig));
  auto g3 = group_closure(ps3.m, sg3);
  CHECK(g3.order() == 6);

  CHECK(is_g_invariant(ps3.m, g3,
                       parse_formula("AG (!(c1 & c2) & !(c1 & c3) & !(c2 & c3))")));
  // syntactically split over the processes the parts are not orbit-constant
  CHECK(!is_g_invariant(ps3.m, g3,
                        parse_formula("AG !(c1 & c2) & AG !(c1 & c3) & AG !(c2 & c3)")));
}

TEST_CASE("invariant verdicts transfer between structure and quotient") {
  auto p = make_ntc_mutex_program(2);
  auto ps = global_structure(p);
  std::vector<StateMapping> sgens;
  for (const auto& ig : full_index_generators(p))
    sgens.push_back(index_group_action(p, ps, ig));
  auto g = group_closure(ps.m, sgens);
  auto q = quotient(ps.m, g);

  for (const char* text : {"AG !(c1 & c2)", "EF (c1 & c2)", "AG (n1 | t1 | c1 | n2 | t2 | c2)"}) {
    auto f = parse_formula(text);
    REQUIRE(is_g_invariant(ps.m, g, f));
    auto sm = check(ps.m, f);
    auto sq = check(q.quotient, f);
    for (StateId s = 0; s < ps.m.num_states(); ++s) {
      CAPTURE(text);
      CHECK(sm.holds_at(s) == sq.holds_at(q.quotient_id(s)));
    }
    CHECK(models(ps.m, f) == models(q.quotient, f));
  }
}
