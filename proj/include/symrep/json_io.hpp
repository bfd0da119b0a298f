#pragma once

#include <string>
#include <vector>

#include "symrep/ctl.hpp"
#include "symrep/kripke.hpp"
#include "symrep/symmetry.hpp"

namespace symrep {

// Structure files: {"states": [...], "initial": [...], "ap": [...],
// "labels": {state: [props]}, "transitions": [[from, to], ...]}.
// Serialization is canonical: states in id order, labels in ap order,
// transitions sorted, two-space indent. parse(serialize(m)) round-trips
// byte-identically.
KripkeStructure parse_structure(const std::string& json_text);
KripkeStructure load_structure(const std::string& path);
std::string serialize_structure(const KripkeStructure& m);

// Substructures exported as structure files drop states that became
// unreachable from the derived initial set.
KripkeStructure substructure_as_structure(const SubStructure& n);

// Group files: a JSON array of generators, each an object mapping state name
// to state name (omitted names are fixed points).
std::vector<StateMapping> parse_group_generators(const std::string& json_text,
                                                 const KripkeStructure& m);
std::vector<StateMapping> load_group_generators(const std::string& path,
                                                const KripkeStructure& m);
std::string serialize_group_generators(const std::vector<StateMapping>& gens,
                                       const KripkeStructure& m);

// Representative map as {"source-state": "representative", ...}
std::string serialize_theta(const QuotientResult& q);

std::string serialize_satset(const SatSet& s, const KripkeStructure& m);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace symrep
