#include "symrep/kripke.hpp"

#include <algorithm>
#include <stdexcept>

namespace symrep {

std::vector<StateId> sorted_unique(std::vector<StateId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Transition> sorted_unique(std::vector<Transition> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool sorted_contains(const std::vector<StateId>& v, StateId x) {
  return std::binary_search(v.begin(), v.end(), x);
}

bool sorted_contains(const std::vector<Transition>& v, const Transition& x) {
  return std::binary_search(v.begin(), v.end(), x);
}

bool sorted_subset(const std::vector<StateId>& a, const std::vector<StateId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool sorted_subset(const std::vector<Transition>& a, const std::vector<Transition>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void KripkeStructure::finalize() {
  initial = sorted_unique(std::move(initial));
  transitions = sorted_unique(std::move(transitions));
  succ.assign(names.size(), {});
  pred.assign(names.size(), {});
  for (const auto& [a, b] : transitions) {
    succ[a].push_back(b);
    pred[b].push_back(a);
  }
  name_index_.clear();
  for (StateId s = 0; s < names.size(); ++s) name_index_[names[s]] = s;
}

std::optional<StateId> KripkeStructure::state_by_name(const std::string& n) const {
  auto it = name_index_.find(n);
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> KripkeStructure::ap_index(const std::string& p) const {
  for (std::size_t i = 0; i < ap.size(); ++i)
    if (ap[i] == p) return i;
  return std::nullopt;
}

bool KripkeStructure::has_transition(StateId a, StateId b) const {
  return sorted_contains(transitions, Transition{a, b});
}

bool KripkeStructure::is_initial(StateId s) const { return sorted_contains(initial, s); }

KripkeStructure make_structure(std::vector<std::string> names,
                               const std::vector<std::string>& initial,
                               std::vector<std::string> ap,
                               const std::vector<std::pair<std::string, std::vector<std::string>>>& labels,
                               const std::vector<std::pair<std::string, std::string>>& transitions) {
  KripkeStructure m;
  m.names = std::move(names);
  m.ap = std::move(ap);
  m.labels.assign(m.names.size(), std::vector<bool>(m.ap.size(), false));
  m.finalize();  // build the name index before resolving names

  auto need = [&](const std::string& n) -> StateId {
    auto id = m.state_by_name(n);
    if (!id) throw std::invalid_argument("unknown state name: " + n);
    return *id;
  };
  for (const auto& n : initial) m.initial.push_back(need(n));
  for (const auto& [name, props] : labels) {
    StateId s = need(name);
    for (const auto& p : props) {
      auto pi = m.ap_index(p);
      if (!pi) throw std::invalid_argument("label uses unknown proposition: " + p);
      m.labels[s][*pi] = true;
    }
  }
  for (const auto& [a, b] : transitions) m.transitions.emplace_back(need(a), need(b));
  m.finalize();
  return m;
}

ValidationReport validate_structure(const KripkeStructure& m) {
  ValidationReport r;
  if (m.names.empty()) r.errors.push_back("structure has no states");
  {
    auto sorted = m.names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      r.errors.push_back("duplicate state names");
  }
  if (m.initial.empty()) r.errors.push_back("initial state set is empty");
  for (StateId s : m.initial)
    if (s >= m.num_states()) r.errors.push_back("initial state id out of range");
  for (const auto& [a, b] : m.transitions)
    if (a >= m.num_states() || b >= m.num_states())
      r.errors.push_back("transition endpoint out of range");
  if (m.labels.size() != m.num_states())
    r.errors.push_back("labels not defined for exactly the states");
  for (const auto& row : m.labels)
    if (row.size() != m.ap.size()) r.errors.push_back("label row size mismatch");
  if (!r.errors.empty()) return r;

  for (StateId s = 0; s < m.num_states(); ++s)
    if (m.succ.size() <= s || m.succ[s].empty())
      r.errors.push_back("totality violated: state " + m.names[s] + " has no outgoing transition");

  // reachability from the initial set
  std::vector<bool> seen(m.num_states(), false);
  std::vector<StateId> stack(m.initial.begin(), m.initial.end());
  for (StateId s : stack) seen[s] = true;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (StateId t : m.succ[s])
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
  }
  for (StateId s = 0; s < m.num_states(); ++s)
    if (!seen[s]) r.errors.push_back("state " + m.names[s] + " unreachable from the initial set");
  return r;
}

bool SubStructure::contains_state(StateId s) const { return sorted_contains(states, s); }

bool SubStructure::contains_transition(StateId a, StateId b) const {
  return sorted_contains(transitions, Transition{a, b});
}

std::vector<StateId> SubStructure::derived_initial() const {
  std::vector<StateId> out;
  for (StateId s : parent->initial)
    if (contains_state(s)) out.push_back(s);
  return out;
}

SubStructure full_substructure(const KripkeStructure& m) {
  SubStructure n;
  n.parent = &m;
  n.states.resize(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s) n.states[s] = s;
  n.transitions = m.transitions;
  return n;
}

SubStructure empty_substructure(const KripkeStructure& m) {
  SubStructure n;
  n.parent = &m;
  return n;
}

bool is_substructure(const SubStructure& n, const KripkeStructure& m) {
  if (n.parent != &m) throw std::invalid_argument("substructure parent mismatch");
  for (StateId s : n.states)
    if (s >= m.num_states()) return false;
  if (!sorted_subset(n.transitions, m.transitions)) return false;
  for (const auto& [a, b] : n.transitions)
    if (!n.contains_state(a) || !n.contains_state(b)) return false;
  // total or empty
  for (StateId s : n.states) {
    bool out = false;
    for (StateId t : m.succ[s])
      if (n.contains_transition(s, t)) {
        out = true;
        break;
      }
    if (!out) return false;
  }
  return true;
}

SubStructure prune_to_total(const KripkeStructure& m,
                            std::vector<StateId> states,
                            std::vector<Transition> transitions) {
  states = sorted_unique(std::move(states));
  transitions = sorted_unique(std::move(transitions));

  std::vector<bool> keep_state(m.num_states(), false);
  for (StateId s : states) keep_state[s] = true;

  std::vector<Transition> trans;
  trans.reserve(transitions.size());
  for (const auto& t : transitions)
    if (sorted_contains(m.transitions, t) && keep_state[t.first] && keep_state[t.second])
      trans.push_back(t);

  std::vector<std::size_t> outdeg(m.num_states(), 0);
  for (const auto& [a, b] : trans) {
    (void)b;
    ++outdeg[a];
  }

  // cascade: drop states with no outgoing edge, then edges into them
  bool changed = true;
  while (changed) {
    changed = false;
    for (StateId s : states)
      if (keep_state[s] && outdeg[s] == 0) {
        keep_state[s] = false;
        changed = true;
      }
    if (!changed) break;
    std::vector<Transition> next;
    next.reserve(trans.size());
    for (const auto& t : trans) {
      if (keep_state[t.first] && keep_state[t.second]) {
        next.push_back(t);
      } else if (keep_state[t.first]) {
        --outdeg[t.first];
      }
    }
    trans = std::move(next);
  }

  SubStructure n;
  n.parent = &m;
  for (StateId s : states)
    if (keep_state[s]) n.states.push_back(s);
  n.transitions = std::move(trans);
  return n;
}

SubStructure reachable_part(const SubStructure& n) {
  std::vector<bool> seen(n.parent->num_states(), false);
  std::vector<StateId> stack = n.derived_initial();
  for (StateId s : stack) seen[s] = true;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const auto& [a, b] : n.transitions)
      if (a == s && !seen[b]) {
        seen[b] = true;
        stack.push_back(b);
      }
  }
  SubStructure out;
  out.parent = n.parent;
  for (StateId s : n.states)
    if (seen[s]) out.states.push_back(s);
  for (const auto& t : n.transitions)
    if (seen[t.first]) out.transitions.push_back(t);
  return out;
}

SubStructure join(const SubStructure& a, const SubStructure& b) {
  if (a.parent != b.parent) throw std::invalid_argument("join: parent mismatch");
  SubStructure n;
  n.parent = a.parent;
  std::set_union(a.states.begin(), a.states.end(), b.states.begin(), b.states.end(),
                 std::back_inserter(n.states));
  std::set_union(a.transitions.begin(), a.transitions.end(), b.transitions.begin(),
                 b.transitions.end(), std::back_inserter(n.transitions));
  return n;
}

SubStructure meet(const SubStructure& a, const SubStructure& b) {
  if (a.parent != b.parent) throw std::invalid_argument("meet: parent mismatch");
  std::vector<StateId> states;
  std::vector<Transition> trans;
  std::set_intersection(a.states.begin(), a.states.end(), b.states.begin(), b.states.end(),
                        std::back_inserter(states));
  std::set_intersection(a.transitions.begin(), a.transitions.end(), b.transitions.begin(),
                        b.transitions.end(), std::back_inserter(trans));
  return prune_to_total(*a.parent, std::move(states), std::move(trans));
}

SubStructure generated(const KripkeStructure& m, const std::vector<StateId>& states) {
  auto ss = sorted_unique(states);
  std::vector<Transition> induced;
  for (const auto& t : m.transitions)
    if (sorted_contains(ss, t.first) && sorted_contains(ss, t.second)) induced.push_back(t);
  return prune_to_total(m, std::move(ss), std::move(induced));
}

std::vector<SubStructure> enumerate_substructures(const KripkeStructure& m,
                                                  std::size_t max_transitions) {
  if (m.transitions.size() > max_transitions)
    throw std::invalid_argument("enumerate_substructures: too many transitions (" +
                                std::to_string(m.transitions.size()) + " > bound " +
                                std::to_string(max_transitions) + ")");
  const std::size_t k = m.transitions.size();
  std::vector<SubStructure> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<std::size_t> outdeg(m.num_states(), 0);
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) ++outdeg[m.transitions[i].first];
    bool total = true;
    for (std::size_t i = 0; i < k && total; ++i)
      if (mask >> i & 1) {
        if (outdeg[m.transitions[i].second] == 0) total = false;
      }
    if (!total) continue;
    SubStructure n;
    n.parent = &m;
    std::vector<bool> in(m.num_states(), false);
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) {
        n.transitions.push_back(m.transitions[i]);
        in[m.transitions[i].first] = in[m.transitions[i].second] = true;
      }
    for (StateId s = 0; s < m.num_states(); ++s)
      if (in[s]) n.states.push_back(s);
    n.transitions = sorted_unique(std::move(n.transitions));
    out.push_back(std::move(n));
  }
  return out;
}

Lattice Lattice::enumerate(const KripkeStructure& m, std::size_t max_transitions) {
  Lattice l;
  l.parent = &m;
  l.elements = enumerate_substructures(m, max_transitions);
  return l;
}

}  // namespace symrep
