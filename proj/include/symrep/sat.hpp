#pragma once

#include <optional>
#include <string>
#include <vector>

namespace symrep {

// Clause container with named variables (names land in the DIMACS comment
// header so models can be decoded externally).
struct CnfInstance {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::vector<std::string> var_names;  // var_names[v-1] names variable v

  int new_var(std::string name) {
    var_names.push_back(std::move(name));
    return ++num_vars;
  }
  void add_clause(std::vector<int> lits) { clauses.push_back(std::move(lits)); }

  [[nodiscard]] std::string to_dimacs() const;
};

// Complete deterministic DPLL: two watched literals, unit propagation,
// chronological backtracking; branching picks the lowest-index unassigned
// variable, true first. Returns the model (indexed by var-1) or nullopt.
std::optional<std::vector<bool>> sat_solve(const CnfInstance& inst);

// Sinz sequential-counter cardinality constraints over the given literals.
void add_at_most_k(CnfInstance& inst, const std::vector<int>& lits, int k);
void add_at_least_k(CnfInstance& inst, const std::vector<int>& lits, int k);

// Parse "s SATISFIABLE/UNSATISFIABLE" + "v ..." solver output (as produced by
// standard SAT competition solvers). Returns nullopt for UNSAT; throws on
// malformed output.
std::optional<std::vector<bool>> parse_solver_output(const std::string& text, int num_vars);

}  // namespace symrep
