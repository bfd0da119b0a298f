#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace symrep {

using StateId = std::uint32_t;
using Transition = std::pair<StateId, StateId>;

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  [[nodiscard]] bool ok() const { return errors.empty(); }
};

// Finite structure over a fixed proposition set. State identity is the dense
// index into `names` (insertion order of the input); all stored id sets are
// kept sorted and duplicate-free.
struct KripkeStructure {
  std::vector<std::string> names;
  std::vector<StateId> initial;
  std::vector<Transition> transitions;
  std::vector<std::string> ap;
  std::vector<std::vector<bool>> labels;  // labels[s][p] over ap order

  // derived adjacency, rebuilt by finalize()
  std::vector<std::vector<StateId>> succ;
  std::vector<std::vector<StateId>> pred;

  void finalize();

  [[nodiscard]] std::size_t num_states() const { return names.size(); }
  [[nodiscard]] std::optional<StateId> state_by_name(const std::string& n) const;
  [[nodiscard]] std::optional<std::size_t> ap_index(const std::string& p) const;
  [[nodiscard]] bool has_transition(StateId a, StateId b) const;
  [[nodiscard]] bool is_initial(StateId s) const;

 private:
  std::unordered_map<std::string, StateId> name_index_;
};

KripkeStructure make_structure(std::vector<std::string> names,
                               const std::vector<std::string>& initial,
                               std::vector<std::string> ap,
                               const std::vector<std::pair<std::string, std::vector<std::string>>>& labels,
                               const std::vector<std::pair<std::string, std::string>>& transitions);

// All KripkeStructure invariants: nonempty, total, nonempty initial set,
// every state reachable from the initial set, labels/transitions well formed.
ValidationReport validate_structure(const KripkeStructure& m);

// Substructure: a sub-collection of states and transitions of `parent`.
// Initial states and labels are derived (restriction), so only the two sets
// are stored. Invariant for values produced by this module: total-or-empty.
struct SubStructure {
  const KripkeStructure* parent = nullptr;
  std::vector<StateId> states;
  std::vector<Transition> transitions;

  [[nodiscard]] bool empty() const { return states.empty(); }
  [[nodiscard]] bool contains_state(StateId s) const;
  [[nodiscard]] bool contains_transition(StateId a, StateId b) const;
  [[nodiscard]] std::vector<StateId> derived_initial() const;

  friend bool operator==(const SubStructure& a, const SubStructure& b) {
    return a.parent == b.parent && a.states == b.states && a.transitions == b.transitions;
  }
};

SubStructure full_substructure(const KripkeStructure& m);
SubStructure empty_substructure(const KripkeStructure& m);

// Checks the substructure clauses plus the total-or-empty requirement on an
// arbitrary candidate. Throws std::invalid_argument on parent mismatch.
bool is_substructure(const SubStructure& n, const KripkeStructure& m);

// Greatest total kernel of the given sets: repeatedly delete states with no
// remaining outgoing transition (and their incident transitions). Input sets
// need not be sorted; transitions outside states x states are dropped first.
SubStructure prune_to_total(const KripkeStructure& m,
                            std::vector<StateId> states,
                            std::vector<Transition> transitions);

// Restriction to the states reachable from the derived initial set along kept
// transitions. Keeps every kept transition between surviving states, so a
// total input stays total (reachable states keep all their successors).
SubStructure reachable_part(const SubStructure& n);

// Smallest substructure containing both; componentwise union.
SubStructure join(const SubStructure& a, const SubStructure& b);

// Largest substructure contained in both; componentwise intersection pruned
// back to totality.
SubStructure meet(const SubStructure& a, const SubStructure& b);

// Largest substructure on a subset of `states`: induced transitions, pruned.
SubStructure generated(const KripkeStructure& m, const std::vector<StateId>& states);

// Every (states, transitions) pair forming a valid total-or-empty
// substructure, exactly once, in a deterministic order. Since totality rules
// out isolated states, candidates are exactly the transition subsets whose
// targets all have an outgoing transition in the subset.
std::vector<SubStructure> enumerate_substructures(const KripkeStructure& m,
                                                  std::size_t max_transitions = 20);

// Materialized substructure lattice, desk scale only.
struct Lattice {
  const KripkeStructure* parent = nullptr;
  std::vector<SubStructure> elements;

  static Lattice enumerate(const KripkeStructure& m, std::size_t max_transitions = 20);
};

// sorted-vector set helpers shared across modules
std::vector<StateId> sorted_unique(std::vector<StateId> v);
std::vector<Transition> sorted_unique(std::vector<Transition> v);
bool sorted_contains(const std::vector<StateId>& v, StateId x);
bool sorted_contains(const std::vector<Transition>& v, const Transition& x);
bool sorted_subset(const std::vector<StateId>& a, const std::vector<StateId>& b);
bool sorted_subset(const std::vector<Transition>& a, const std::vector<Transition>& b);

}  // namespace symrep
