#pragma once

#include <functional>
#include <map>
#include <optional>

#include "symrep/ctl.hpp"
#include "symrep/kripke.hpp"
#include "symrep/sat.hpp"
#include "symrep/symmetry.hpp"

namespace symrep {

// Positive normal form: negation only immediately above propositions. May
// introduce AU/EU nodes (duals of ER/AR). Semantics-preserving.
CtlPtr to_pnf(const CtlPtr& f);
bool is_pnf(const CtlPtr& f);

// Deletion-variable encoding of "some total substructure with a kept initial
// state satisfies f". One keep variable per state and per transition;
// satisfaction variables y[s, node] are constrained one-directionally (y true
// forces the semantics), which is exact because universal/greatest-fixpoint
// operators tolerate over-approximation of the kept sets while least-fixpoint
// operators (AU/EU) get explicit unary rank levels forcing well-founded
// witnesses.
struct RepairEncoding {
  CnfInstance cnf;
  std::vector<int> keep_state;                     // per state id
  std::vector<int> keep_trans;                     // per transition index
  std::map<std::string, std::vector<int>> y_vars;  // node key -> per-state vars
  int levels = 0;                                  // rank horizon used for AU/EU
};

RepairEncoding encode_repair(const KripkeStructure& m, const CtlPtr& pnf,
                             bool require_initial = true);

SubStructure decode_model(const KripkeStructure& m, const RepairEncoding& enc,
                          const std::vector<bool>& model);

using SolverFn = std::function<std::optional<std::vector<bool>>(const CnfInstance&)>;

struct RepairOptions {
  bool require_initial = true;
  bool maximize_retained = false;
  SolverFn solver;                          // defaults to the built-in solver
  std::optional<std::string> emit_cnf_path; // write the base encoding as DIMACS
};

// Largest-effort subtractive repair: returns a total substructure modeling f,
// re-verified with the independent checker before returning, or nullopt when
// no repair exists. Throws std::invalid_argument on invalid input structure
// or unknown propositions.
std::optional<SubStructure> repair(const KripkeStructure& m, const CtlPtr& f,
                                   const RepairOptions& opts = {});

// Enumeration oracle: all substructures, filter nonempty + initial-containing
// + models(f), pick a maximum-transition-count witness (first in enumeration
// order on ties).
std::optional<SubStructure> brute_force_repair(const KripkeStructure& m, const CtlPtr& f,
                                               std::size_t max_transitions = 20);

struct QuotientRepair {
  std::shared_ptr<QuotientResult> q;
  SubStructure quotient_repair;  // substructure of q->quotient
  SubStructure lifted;           // G-maximal substructure of the source
};

// Repairs the quotient and lifts the result maximally. Requires f invariant
// under g (throws otherwise). nullopt = no symmetric repair exists.
std::optional<QuotientRepair> repair_via_quotient(const KripkeStructure& m,
                                                  const SymmetryGroup& g,
                                                  const RepresentativeMap& theta,
                                                  const CtlPtr& f,
                                                  const RepairOptions& opts = {});

}  // namespace symrep
