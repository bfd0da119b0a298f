#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symrep/ctl.hpp"
#include "symrep/kripke.hpp"
#include "symrep/symmetry.hpp"

namespace symrep {

// ---------------------------------------------------------------------------
// guards

struct GuardExpr;
using GuardPtr = std::shared_ptr<const GuardExpr>;

// Boolean condition over atomic propositions (any process's) and shared
// variable equalities. Extraction only produces conjunctions of literals; the
// parser accepts the full grammar.
struct GuardExpr {
  enum class Kind { True, False, Prop, SharedEq, Not, And, Or };
  Kind kind;
  std::string name;   // Prop: proposition; SharedEq: shared variable
  std::string value;  // SharedEq: compared value
  GuardPtr lhs, rhs;
};

namespace guard {
GuardPtr t();
GuardPtr f();
GuardPtr prop(std::string name);
GuardPtr eq(std::string var, std::string value);
GuardPtr not_(GuardPtr a);
GuardPtr and_(GuardPtr a, GuardPtr b);
GuardPtr or_(GuardPtr a, GuardPtr b);
}  // namespace guard

std::string to_string(const GuardPtr& g);

// ---------------------------------------------------------------------------
// program model

struct SharedVarDecl {
  std::string name;
  std::vector<std::string> values;  // finite ordered domain
  std::string init;                 // member of values
};

// A local state fixes the truth of every proposition the process owns: the
// listed props hold, the rest of the process's AP is false there.
struct LocalState {
  std::string name;
  std::vector<std::string> props;
};

struct Action {
  std::string from, to;  // local state names of the owning process
  GuardPtr guard;
  std::vector<std::pair<std::string, std::string>> assigns;  // shared var := value
};

struct Process {
  std::vector<LocalState> locals;
  std::string initial_local;
  std::vector<Action> actions;

  // propositions owned by this process, in first-appearance order
  [[nodiscard]] std::vector<std::string> ap() const;
  [[nodiscard]] std::optional<std::uint32_t> local_index(const std::string& n) const;
};

struct ConcurrentProgram {
  std::string name;  // informational only
  std::vector<SharedVarDecl> shared;
  std::vector<Process> processes;

  [[nodiscard]] std::vector<std::string> ap() const;  // concatenation by process
  [[nodiscard]] std::optional<std::size_t> shared_index(const std::string& n) const;
};

// Nonempty process list, per-process AP disjointness, well-formed locals,
// initial locals, guards and assignments over declared symbols.
ValidationReport validate_program(const ConcurrentProgram& p);

// text format (see README / serialize_program for the concrete shape)
ConcurrentProgram parse_program(const std::string& text);
ConcurrentProgram load_program(const std::string& path);
std::string serialize_program(const ConcurrentProgram& p);

// ---------------------------------------------------------------------------
// global semantics

struct GlobalState {
  std::vector<std::uint32_t> locals;  // local-state index per process
  std::vector<std::uint32_t> shared;  // value index per shared variable
  auto operator<=>(const GlobalState&) const = default;
};

GlobalState initial_global_state(const ConcurrentProgram& p);
std::string global_state_name(const ConcurrentProgram& p, const GlobalState& s);
bool eval_guard(const ConcurrentProgram& p, const GuardPtr& g, const GlobalState& s);

// Which process moved, into which local state, with the shared values after
// the move: enough to reconstruct the concrete successor of a concrete source.
struct TransLabel {
  std::uint32_t process;
  std::uint32_t to_local;
  std::vector<std::uint32_t> shared_after;
  auto operator<=>(const TransLabel&) const = default;
};

struct ProgramStructure {
  KripkeStructure m;                 // states sorted by global-state encoding
  std::vector<GlobalState> globals;  // state id -> global state
  std::map<Transition, std::vector<TransLabel>> edge_labels;
};

// Interleaved execution from the single initial global state. Labels come
// from the local states' AP assignments only. Throws when the reachable graph
// is not total (dead states listed) or exceeds max_states.
ProgramStructure global_structure(const ConcurrentProgram& p,
                                  std::size_t max_states = 1u << 20);

// ---------------------------------------------------------------------------
// index symmetry

// pi permutes process indices; processes must be structurally isomorphic
// under positional renaming along pi. shared_action optionally permutes each
// shared variable's values (empty = identity).
struct IndexPermutation {
  std::vector<std::uint32_t> pi;
  std::vector<std::vector<std::uint32_t>> shared_action;

  friend bool operator==(const IndexPermutation& a, const IndexPermutation& b) {
    return a.pi == b.pi && a.shared_action == b.shared_action;
  }
  friend bool operator<(const IndexPermutation& a, const IndexPermutation& b) {
    return std::tie(a.pi, a.shared_action) < std::tie(b.pi, b.shared_action);
  }
};

ValidationReport validate_index_permutation(const ConcurrentProgram& p,
                                            const IndexPermutation& g);

IndexPermutation identity_index_permutation(const ConcurrentProgram& p);
IndexPermutation compose(const ConcurrentProgram& p, const IndexPermutation& f,
                         const IndexPermutation& g);  // f after g

// adjacent transpositions (generate the full symmetric group on indices)
std::vector<IndexPermutation> full_index_generators(const ConcurrentProgram& p);

std::vector<IndexPermutation> index_group_closure(const ConcurrentProgram& p,
                                                  std::vector<IndexPermutation> gens,
                                                  std::size_t bound = 10080);

GlobalState apply_index_permutation(const ConcurrentProgram& p, const IndexPermutation& g,
                                    const GlobalState& s);

// the induced state mapping on an already-built global structure
StateMapping index_group_action(const ConcurrentProgram& p, const ProgramStructure& ps,
                                const IndexPermutation& g);

// minimum of the orbit of s under the generated group, by state encoding
GlobalState canonicalize(const ConcurrentProgram& p,
                         const std::vector<IndexPermutation>& gens, const GlobalState& s,
                         std::size_t orbit_bound = 1u << 20);

// Quotient-equivalent structure built on the fly: frontier search over
// canonicalized states only, never materializing the full global graph.
// Coincides state-for-state with quotient(global_structure(p), G, orbit-min)
// whenever the latter is small enough to build.
ProgramStructure reduced_structure(const ConcurrentProgram& p,
                                   const std::vector<IndexPermutation>& gens,
                                   std::size_t max_states = 1u << 20);

// ---------------------------------------------------------------------------
// extraction of repaired programs

// Action of the labeled transition leaving `from`: the guard pins every other
// process's propositions and every shared value at the concrete source; the
// assignment records exactly the shared values the move changes.
Action extract_action(const ConcurrentProgram& p, const ProgramStructure& ps,
                      StateId from, const TransLabel& label);

// One action per labeled kept transition, deduplicated, deterministic order.
// Throws on an empty substructure or a kept transition without labels.
ConcurrentProgram extract_program(const ConcurrentProgram& p, const ProgramStructure& ps,
                                  const SubStructure& nprime);

enum class CloseMode { None, Minimal, Full };

// Add group-conjugated actions until every local state reachable in the
// product has an outgoing action (minimal), or close the action set under the
// whole group (full). Throws when a dead end survives full closure.
ConcurrentProgram close_dead_ends(const ConcurrentProgram& extracted,
                                  const std::vector<IndexPermutation>& gens,
                                  CloseMode mode);

// Drop guard conjuncts whose removal cannot be observed on any state in the
// orbit closure of the source structure's states; re-verification still
// applies afterwards. Guards that are not conjunctions of literals are kept.
ConcurrentProgram simplify_guards(const ConcurrentProgram& extracted,
                                  const ConcurrentProgram& original,
                                  const ProgramStructure& ps,
                                  const std::vector<IndexPermutation>& gens);

struct ExtractVerification {
  bool models_ok = false;
  BisimReport bisim;
  std::size_t mprime_states = 0;

  [[nodiscard]] bool ok() const { return models_ok && bisim.ok(); }
};

// Rebuilds the extracted program's global structure and checks (a) it models
// f and (b) the canonicalization pairing with nprime is a bisimulation with
// initial states covered in both directions.
ExtractVerification verify_extracted(const ConcurrentProgram& prog_hat,
                                     const ConcurrentProgram& original,
                                     const ProgramStructure& ps, const SubStructure& nprime,
                                     const std::vector<IndexPermutation>& gens,
                                     const CtlPtr& f);

// ---------------------------------------------------------------------------
// example families

// n processes, locals N -> C -> N with unguarded moves; props n_i, c_i
ConcurrentProgram make_nc_mutex_program(std::size_t n);
// n processes, locals N -> T -> C -> N with unguarded moves; props n_i, t_i, c_i
ConcurrentProgram make_ntc_mutex_program(std::size_t n);

}  // namespace symrep
