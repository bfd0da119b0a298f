#pragma once

#include <map>
#include <string>

#include "symrep/kripke.hpp"
#include "symrep/programs.hpp"

namespace symrep {

struct DotOptions {
  // parent elements missing from the substructure render dashed
  const SubStructure* overlay = nullptr;
  // color edges by the moving process and print the process numbers
  const std::map<Transition, std::vector<TransLabel>>* edge_labels = nullptr;
  bool show_labels = true;  // proposition sets under the state names
};

// Graphviz digraph, stable ordering: states by id, transitions sorted.
// Initial states are double-circled.
std::string to_dot(const KripkeStructure& m, const DotOptions& opts = {});

// overlay form: the substructure solid, the rest of its parent dashed
std::string to_dot(const SubStructure& n);

}  // namespace symrep
