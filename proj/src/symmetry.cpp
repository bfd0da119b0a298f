#include "symrep/symmetry.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace symrep {

StateMapping identity_mapping(std::size_t n) {
  StateMapping g;
  g.map.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.map[i] = static_cast<StateId>(i);
  return g;
}

StateMapping compose(const StateMapping& f, const StateMapping& g) {
  StateMapping h;
  h.map.resize(g.map.size());
  for (std::size_t s = 0; s < g.map.size(); ++s) h.map[s] = f.map[g.map[s]];
  return h;
}

StateMapping inverse(const StateMapping& f) {
  StateMapping h;
  h.map.resize(f.map.size());
  for (std::size_t s = 0; s < f.map.size(); ++s) h.map[f.map[s]] = static_cast<StateId>(s);
  return h;
}

bool is_state_mapping(const KripkeStructure& m, const StateMapping& g) {
  if (g.map.size() != m.num_states()) return false;
  std::vector<bool> hit(m.num_states(), false);
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (g.map[s] >= m.num_states() || hit[g.map[s]]) return false;
    hit[g.map[s]] = true;
  }
  std::vector<StateId> mapped_initial;
  for (StateId s : m.initial) mapped_initial.push_back(g(s));
  if (sorted_unique(std::move(mapped_initial)) != m.initial) return false;
  // forward preservation of a finite transition set under a bijection is
  // automatically two-sided
  for (const auto& [a, b] : m.transitions)
    if (!m.has_transition(g(a), g(b))) return false;
  return true;
}

SymmetryGroup group_closure(const KripkeStructure& m, std::vector<StateMapping> gens,
                            std::size_t bound) {
  for (const auto& g : gens)
    if (!is_state_mapping(m, g))
      throw std::invalid_argument("group_closure: generator is not a state-mapping");
  SymmetryGroup grp;
  grp.carrier = &m;
  grp.generators = gens;
  std::set<StateMapping> seen;
  std::vector<StateMapping> queue;
  auto id = identity_mapping(m.num_states());
  seen.insert(id);
  queue.push_back(id);
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    auto cur = queue[qi];  // copy: queue may reallocate
    for (const auto& g : gens) {
      auto nxt = compose(g, cur);
      if (seen.insert(nxt).second) {
        if (seen.size() > bound)
          throw std::invalid_argument("group_closure: closure exceeds bound " +
                                      std::to_string(bound));
        queue.push_back(std::move(nxt));
      }
    }
  }
  grp.elements.assign(seen.begin(), seen.end());
  return grp;
}

std::vector<std::vector<StateId>> orbits(const SymmetryGroup& g) {
  const std::size_t n = g.carrier->num_states();
  std::vector<StateId> root(n);
  for (std::size_t s = 0; s < n; ++s) root[s] = static_cast<StateId>(s);
  std::function<StateId(StateId)> find = [&](StateId s) {
    while (root[s] != s) {
      root[s] = root[root[s]];
      s = root[s];
    }
    return s;
  };
  for (const auto& gen : g.generators)
    for (StateId s = 0; s < n; ++s) {
      StateId a = find(s), b = find(gen(s));
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  std::vector<std::vector<StateId>> out;
  std::vector<std::int32_t> slot(n, -1);
  for (StateId s = 0; s < n; ++s) {
    StateId r = find(s);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::int32_t>(out.size());
      out.emplace_back();
    }
    out[slot[r]].push_back(s);
  }
  return out;
}

RepresentativeMap canonical_representative_map(const SymmetryGroup& g) {
  RepresentativeMap t;
  t.theta.resize(g.carrier->num_states());
  for (const auto& orb : orbits(g))
    for (StateId s : orb) t.theta[s] = orb.front();
  return t;
}

ValidationReport validate_representative_map(const SymmetryGroup& g,
                                             const RepresentativeMap& t) {
  ValidationReport r;
  const std::size_t n = g.carrier->num_states();
  if (t.theta.size() != n) {
    r.errors.push_back("representative map has wrong domain size");
    return r;
  }
  auto orbs = orbits(g);
  std::vector<std::size_t> orbit_of(n);
  for (std::size_t i = 0; i < orbs.size(); ++i)
    for (StateId s : orbs[i]) orbit_of[s] = i;
  for (const auto& orb : orbs)
    for (StateId s : orb)
      if (t(s) != t(orb.front()))
        r.errors.push_back("does not respect orbits at state " + g.carrier->names[s]);
  for (StateId s = 0; s < n; ++s) {
    if (orbit_of[t(s)] != orbit_of[s])
      r.errors.push_back("maps " + g.carrier->names[s] + " outside its orbit");
    if (t(t(s)) != t(s))
      r.errors.push_back("not idempotent at state " + g.carrier->names[s]);
  }
  for (std::size_t i = 0; i < orbs.size(); ++i)
    for (std::size_t j = i + 1; j < orbs.size(); ++j)
      if (t(orbs[i].front()) == t(orbs[j].front()))
        r.errors.push_back("does not separate two orbits");
  return r;
}

QuotientResult quotient(const KripkeStructure& m, const SymmetryGroup& g,
                        const RepresentativeMap& t) {
  if (g.carrier != &m) throw std::invalid_argument("quotient: group carrier mismatch");
  auto rep_check = validate_representative_map(g, t);
  if (!rep_check.ok())
    throw std::invalid_argument("quotient: invalid representative map: " + rep_check.errors[0]);

  QuotientResult q;
  q.source = &m;
  q.theta = t;
  std::vector<StateId> reps;
  for (StateId s = 0; s < m.num_states(); ++s) reps.push_back(t(s));
  q.rep_states = sorted_unique(std::move(reps));
  q.to_quotient.assign(m.num_states(), -1);
  for (std::uint32_t i = 0; i < q.rep_states.size(); ++i) q.to_quotient[q.rep_states[i]] = i;
  for (StateId s = 0; s < m.num_states(); ++s) q.to_quotient[s] = q.to_quotient[t(s)];

  KripkeStructure& out = q.quotient;
  for (StateId r : q.rep_states) {
    out.names.push_back(m.names[r]);
    out.labels.push_back(m.labels[r]);
  }
  out.ap = m.ap;
  for (StateId s : m.initial) out.initial.push_back(q.quotient_id(s));
  for (const auto& [a, b] : m.transitions)
    out.transitions.emplace_back(q.quotient_id(a), q.quotient_id(b));
  out.finalize();
  return q;
}

QuotientResult quotient(const KripkeStructure& m, const SymmetryGroup& g) {
  return quotient(m, g, canonical_representative_map(g));
}

bool is_g_closed(const SubStructure& n, const SymmetryGroup& g) {
  if (n.parent != g.carrier) throw std::invalid_argument("is_g_closed: carrier mismatch");
  // closure under each generator of a finite set implies closure under the group
  for (const auto& gen : g.generators) {
    for (StateId s : n.states)
      if (!n.contains_state(gen(s))) return false;
    for (const auto& [a, b] : n.transitions)
      if (!n.contains_transition(gen(a), gen(b))) return false;
  }
  return true;
}

bool is_g_invariant(const KripkeStructure& m, const SymmetryGroup& g, const CtlPtr& f) {
  if (g.carrier != &m) throw std::invalid_argument("is_g_invariant: carrier mismatch");
  for (const auto& p : max_prop_subformulae(f)) {
    auto sat = check(m, p);
    for (const auto& gen : g.generators)
      for (StateId s = 0; s < m.num_states(); ++s)
        if (sat.holds[s] != sat.holds[gen(s)]) return false;
  }
  return true;
}

SubStructure quotient_substructure(const SubStructure& n, const QuotientResult& q) {
  if (n.parent != q.source)
    throw std::invalid_argument("quotient_substructure: parent mismatch");
  SubStructure out;
  out.parent = &q.quotient;
  std::vector<StateId> states;
  std::vector<Transition> trans;
  for (StateId s : n.states) states.push_back(q.quotient_id(s));
  for (const auto& [a, b] : n.transitions)
    trans.emplace_back(q.quotient_id(a), q.quotient_id(b));
  out.states = sorted_unique(std::move(states));
  out.transitions = sorted_unique(std::move(trans));
  return out;
}

SubStructure lift_maximal(const SubStructure& nbar, const QuotientResult& q) {
  if (nbar.parent != &q.quotient)
    throw std::invalid_argument("lift_maximal: substructure not over the quotient");
  SubStructure out;
  out.parent = q.source;
  for (StateId s = 0; s < q.source->num_states(); ++s)
    if (nbar.contains_state(q.quotient_id(s))) out.states.push_back(s);
  for (const auto& [a, b] : q.source->transitions)
    if (nbar.contains_transition(q.quotient_id(a), q.quotient_id(b)))
      out.transitions.emplace_back(a, b);
  return out;
}

SubStructure lift_minimal(const SubStructure& nbar, const QuotientResult& q,
                          const SymmetryGroup& g) {
  if (nbar.parent != &q.quotient)
    throw std::invalid_argument("lift_minimal: substructure not over the quotient");
  if (g.carrier != q.source) throw std::invalid_argument("lift_minimal: carrier mismatch");
  SubStructure out;
  out.parent = q.source;
  for (StateId s = 0; s < q.source->num_states(); ++s)
    if (nbar.contains_state(q.quotient_id(s))) out.states.push_back(s);
  std::vector<Transition> trans;
  for (const auto& [qa, qb] : nbar.transitions) {
    // sorted source transitions: the first match is the lexicographically
    // least witness
    for (const auto& [a, b] : q.source->transitions) {
      if (q.quotient_id(a) == qa && q.quotient_id(b) == qb) {
        for (const auto& e : g.elements) trans.emplace_back(e(a), e(b));
        break;
      }
    }
  }
  out.transitions = sorted_unique(std::move(trans));
  return out;
}

bool is_g_maximal(const SubStructure& n, const QuotientResult& q) {
  return lift_maximal(quotient_substructure(n, q), q) == n;
}

BisimReport check_g_bisimulation(
    const KripkeView& m, const KripkeView& mbar,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& rel,
    const std::function<std::optional<std::uint32_t>(std::uint32_t)>& theta_of,
    const std::function<bool(std::uint32_t, std::uint32_t)>& same_orbit) {
  BisimReport rep;
  std::set<std::pair<std::uint32_t, std::uint32_t>> rs(rel.begin(), rel.end());

  for (const auto& [i, j] : rel) {
    auto expect = theta_of(i);
    if (!expect || *expect != j || !same_orbit(i, j)) rep.pairs_valid = false;
  }

  for (const auto& [i, j] : rel) {
    for (std::uint32_t i2 : m.succ[i]) {
      bool found = false;
      for (std::uint32_t j2 : mbar.succ[j])
        if (rs.count({i2, j2})) {
          found = true;
          break;
        }
      if (!found) rep.forward = false;
    }
    for (std::uint32_t j2 : mbar.succ[j]) {
      bool found = false;
      for (std::uint32_t i2 : m.succ[i])
        if (rs.count({i2, j2})) {
          found = true;
          break;
        }
      if (!found) rep.backward = false;
    }
  }

  // initial states must be matched by related initial states, both ways
  for (StateId s : m.initial) {
    std::uint32_t i = static_cast<std::uint32_t>(m.index_of[s]);
    bool found = false;
    for (StateId t : mbar.initial) {
      std::uint32_t j = static_cast<std::uint32_t>(mbar.index_of[t]);
      if (rs.count({i, j})) {
        found = true;
        break;
      }
    }
    if (!found) rep.initial_covered = false;
  }
  for (StateId t : mbar.initial) {
    std::uint32_t j = static_cast<std::uint32_t>(mbar.index_of[t]);
    bool found = false;
    for (StateId s : m.initial) {
      std::uint32_t i = static_cast<std::uint32_t>(m.index_of[s]);
      if (rs.count({i, j})) {
        found = true;
        break;
      }
    }
    if (!found) rep.initial_covered = false;
  }
  return rep;
}

BisimReport check_g_bisimulation(const KripkeView& m, const KripkeView& mbar,
                                 const QuotientResult& q, const SymmetryGroup& g) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> rel;
  bool missing = false;
  for (std::uint32_t i = 0; i < m.size(); ++i) {
    StateId s = m.states[i];
    StateId rep = q.theta(s);
    std::int32_t j = -1;
    if (q.to_quotient[rep] >= 0) {
      StateId qid = static_cast<StateId>(q.to_quotient[rep]);
      if (qid < mbar.index_of.size()) j = mbar.index_of[qid];
    }
    if (j < 0) {
      missing = true;
      continue;
    }
    rel.emplace_back(i, static_cast<std::uint32_t>(j));
  }
  auto theta_of = [&](std::uint32_t i) -> std::optional<std::uint32_t> {
    StateId qid = q.quotient_id(m.states[i]);
    if (qid >= mbar.index_of.size() || mbar.index_of[qid] < 0) return std::nullopt;
    return static_cast<std::uint32_t>(mbar.index_of[qid]);
  };
  auto same_orbit = [&](std::uint32_t i, std::uint32_t j) {
    StateId s = m.states[i];
    StateId t = q.rep_states[mbar.states[j]];  // quotient id -> source rep id
    for (const auto& e : g.elements)
      if (e(s) == t) return true;
    return false;
  };
  auto rep = check_g_bisimulation(m, mbar, rel, theta_of, same_orbit);
  if (missing) rep.pairs_valid = false;
  return rep;
}

}  // namespace symrep
