#pragma once

#include <functional>
#include <optional>

#include "symrep/ctl.hpp"
#include "symrep/kripke.hpp"

namespace symrep {

// Permutation of the carrier's states: map[s] = g(s).
struct StateMapping {
  std::vector<StateId> map;

  [[nodiscard]] StateId operator()(StateId s) const { return map[s]; }
  friend bool operator==(const StateMapping& a, const StateMapping& b) { return a.map == b.map; }
  friend bool operator<(const StateMapping& a, const StateMapping& b) { return a.map < b.map; }
};

StateMapping identity_mapping(std::size_t n);
StateMapping compose(const StateMapping& f, const StateMapping& g);  // f after g
StateMapping inverse(const StateMapping& f);

// bijection, fixes the initial set setwise, preserves transitions both ways
bool is_state_mapping(const KripkeStructure& m, const StateMapping& g);

struct SymmetryGroup {
  const KripkeStructure* carrier = nullptr;
  std::vector<StateMapping> generators;
  std::vector<StateMapping> elements;  // sorted, closed under composition/inverse

  [[nodiscard]] std::size_t order() const { return elements.size(); }
};

// Closure of the generators under composition (finite, so inverses come for
// free). Throws if the closure exceeds `bound` elements or a generator is not
// a state-mapping.
SymmetryGroup group_closure(const KripkeStructure& m, std::vector<StateMapping> gens,
                            std::size_t bound = 10080);

// Partition of the states into orbits, each sorted, ordered by minimum member.
std::vector<std::vector<StateId>> orbits(const SymmetryGroup& g);

// theta[s] = representative of s's orbit; respects and separates orbits and is
// idempotent (hence maps each state into its own orbit).
struct RepresentativeMap {
  std::vector<StateId> theta;

  [[nodiscard]] StateId operator()(StateId s) const { return theta[s]; }
};

RepresentativeMap canonical_representative_map(const SymmetryGroup& g);  // orbit minimum
ValidationReport validate_representative_map(const SymmetryGroup& g, const RepresentativeMap& t);

struct QuotientResult {
  const KripkeStructure* source = nullptr;
  KripkeStructure quotient;        // states named after their representatives
  RepresentativeMap theta;         // over source states
  std::vector<StateId> rep_states;  // quotient id -> source id, sorted
  std::vector<std::int32_t> to_quotient;  // source id -> quotient id (via theta)

  [[nodiscard]] StateId quotient_id(StateId source_id) const {
    return static_cast<StateId>(to_quotient[source_id]);
  }
};

QuotientResult quotient(const KripkeStructure& m, const SymmetryGroup& g,
                        const RepresentativeMap& t);
QuotientResult quotient(const KripkeStructure& m, const SymmetryGroup& g);

// states and transitions are unions of orbits
bool is_g_closed(const SubStructure& n, const SymmetryGroup& g);

// every maximal propositional subformula evaluates orbit-constantly
bool is_g_invariant(const KripkeStructure& m, const SymmetryGroup& g, const CtlPtr& f);

// image of a G-closed substructure in the quotient
SubStructure quotient_substructure(const SubStructure& n, const QuotientResult& q);

// largest substructure of the source whose image is nbar: full theta-preimage
SubStructure lift_maximal(const SubStructure& nbar, const QuotientResult& q);

// smallest G-closed substructure mapping onto nbar: orbit states plus the
// orbit of one (lexicographically least) witness transition per nbar edge
SubStructure lift_minimal(const SubStructure& nbar, const QuotientResult& q,
                          const SymmetryGroup& g);

bool is_g_maximal(const SubStructure& n, const QuotientResult& q);

struct BisimReport {
  bool pairs_valid = true;      // every pair is (s, theta(s)) with theta(s) in s's orbit
  bool initial_covered = true;  // initial states matched in both directions
  bool forward = true;          // m -> mbar transition transfer
  bool backward = true;         // mbar -> m transition transfer

  [[nodiscard]] bool ok() const { return pairs_valid && initial_covered && forward && backward; }
};

// Generic transfer check over two views related by `rel` (pairs of view
// indices). theta_of maps an m-state to its expected mbar partner; same_orbit
// answers whether a pair lies in one orbit of the acting group.
BisimReport check_g_bisimulation(
    const KripkeView& m, const KripkeView& mbar,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& rel,
    const std::function<std::optional<std::uint32_t>(std::uint32_t)>& theta_of,
    const std::function<bool(std::uint32_t, std::uint32_t)>& same_orbit);

// Quotient instance: relation {(s, theta(s))} between the source (or a
// G-closed substructure view of it) and the quotient (or a substructure view).
BisimReport check_g_bisimulation(const KripkeView& m, const KripkeView& mbar,
                                 const QuotientResult& q, const SymmetryGroup& g);

}  // namespace symrep
