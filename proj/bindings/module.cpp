// Python bindings. Structures, formulas, and programs cross the boundary as
// small owning wrappers; groups are rebuilt from their generator JSON inside
// each call because a closed group holds a pointer to its carrier.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symrep/ctl.hpp"
#include "symrep/dot.hpp"
#include "symrep/json_io.hpp"
#include "symrep/kripke.hpp"
#include "symrep/programs.hpp"
#include "symrep/repair.hpp"
#include "symrep/symmetry.hpp"

namespace py = pybind11;

namespace {

using namespace symrep;

struct PyStructure {
  KripkeStructure m;
};

struct PyFormula {
  CtlPtr f;
};

struct PyProgram {
  ConcurrentProgram p;
};

PyStructure structure_from_json(const std::string& text) {
  PyStructure s{parse_structure(text)};
  const auto rep = validate_structure(s.m);
  if (!rep.ok()) {
    std::string msg = "invalid structure:";
    for (const auto& e : rep.errors) msg += " " + e + ";";
    throw std::invalid_argument(msg);
  }
  return s;
}

SymmetryGroup closure_from_json(const KripkeStructure& m, const std::string& gens_json) {
  return group_closure(m, parse_group_generators(gens_json, m));
}

RepairOptions options_for(bool require_initial, bool maximize) {
  RepairOptions opts;
  opts.require_initial = require_initial;
  opts.maximize_retained = maximize;
  return opts;
}

py::dict check_py(const PyStructure& s, const PyFormula& f) {
  const SatSet sat = check(s.m, f.f);
  py::dict out;
  for (StateId st = 0; st < static_cast<StateId>(s.m.num_states()); ++st)
    out[py::str(s.m.names[st])] = sat.holds_at(st);
  return out;
}

py::dict quotient_py(const PyStructure& s, const std::string& gens_json) {
  const auto g = closure_from_json(s.m, gens_json);
  const auto q = quotient(s.m, g);
  py::dict theta;
  for (StateId st = 0; st < static_cast<StateId>(s.m.num_states()); ++st)
    theta[py::str(s.m.names[st])] = s.m.names[q.theta(st)];
  py::dict out;
  out["quotient"] = PyStructure{q.quotient};
  out["theta"] = theta;
  return out;
}

std::vector<std::vector<std::string>> orbits_py(const PyStructure& s,
                                                const std::string& gens_json) {
  const auto g = closure_from_json(s.m, gens_json);
  std::vector<std::vector<std::string>> out;
  for (const auto& orbit : orbits(g)) {
    std::vector<std::string> names;
    for (StateId st : orbit) names.push_back(s.m.names[st]);
    out.push_back(std::move(names));
  }
  return out;
}

bool is_invariant_py(const PyStructure& s, const std::string& gens_json, const PyFormula& f) {
  return is_g_invariant(s.m, closure_from_json(s.m, gens_json), f.f);
}

std::optional<PyStructure> repair_py(const PyStructure& s, const PyFormula& f,
                                     bool require_initial, bool maximize) {
  const auto r = repair(s.m, f.f, options_for(require_initial, maximize));
  if (!r) return std::nullopt;
  return PyStructure{substructure_as_structure(*r)};
}

std::optional<py::dict> repair_symmetric_py(const PyStructure& s, const std::string& gens_json,
                                            const PyFormula& f, bool require_initial,
                                            bool maximize) {
  const auto g = closure_from_json(s.m, gens_json);
  const auto qr = repair_via_quotient(s.m, g, canonical_representative_map(g), f.f,
                                      options_for(require_initial, maximize));
  if (!qr) return std::nullopt;
  py::dict out;
  out["lifted"] = PyStructure{substructure_as_structure(qr->lifted)};
  out["quotient"] = PyStructure{qr->q->quotient};
  out["quotient_repair"] = PyStructure{substructure_as_structure(qr->quotient_repair)};
  return out;
}

CloseMode close_mode_from(const std::string& s) {
  if (s == "none") return CloseMode::None;
  if (s == "full") return CloseMode::Full;
  if (s == "minimal") return CloseMode::Minimal;
  throw std::invalid_argument("close must be one of: minimal, full, none");
}

std::optional<PyProgram> repair_program_py(const PyProgram& prog, const PyFormula& f,
                                           const std::string& close, bool simplify,
                                           bool maximize) {
  const auto& p = prog.p;
  const auto gens = full_index_generators(p);
  const auto red = reduced_structure(p, gens);
  const auto r = repair(red.m, f.f, options_for(true, maximize));
  if (!r) return std::nullopt;
  const SubStructure kept = reachable_part(*r);
  if (kept.empty()) throw std::invalid_argument("the repair keeps no initial state");

  ConcurrentProgram out =
      close_dead_ends(extract_program(p, red, kept), gens, close_mode_from(close));
  if (simplify) out = simplify_guards(out, p, red, gens);
  const auto ver = verify_extracted(out, p, red, kept, gens, f.f);
  if (!ver.ok()) throw std::logic_error("extracted program failed verification");
  return PyProgram{std::move(out)};
}

std::vector<std::pair<std::string, std::string>> transitions_py(const PyStructure& s) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : s.m.transitions) out.emplace_back(s.m.names[a], s.m.names[b]);
  return out;
}

std::vector<std::string> initial_py(const PyStructure& s) {
  std::vector<std::string> out;
  for (StateId st : s.m.initial) out.push_back(s.m.names[st]);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "symmetry-aware CTL model checking, repair, and program extraction";

  py::class_<PyStructure>(mod, "Structure")
      .def_property_readonly("names", [](const PyStructure& s) { return s.m.names; })
      .def_property_readonly("ap", [](const PyStructure& s) { return s.m.ap; })
      .def_property_readonly("initial", &initial_py)
      .def_property_readonly("transitions", &transitions_py)
      .def_property_readonly("num_states",
                             [](const PyStructure& s) { return s.m.num_states(); })
      .def("to_json", [](const PyStructure& s) { return serialize_structure(s.m); })
      .def("to_dot", [](const PyStructure& s) { return to_dot(s.m); })
      .def("__repr__", [](const PyStructure& s) {
        return "<Structure with " + std::to_string(s.m.num_states()) + " states, " +
               std::to_string(s.m.transitions.size()) + " transitions>";
      });

  py::class_<PyFormula>(mod, "Formula")
      .def("__str__", [](const PyFormula& f) { return to_string(f.f); })
      .def("__repr__", [](const PyFormula& f) { return "<Formula " + to_string(f.f) + ">"; });

  py::class_<PyProgram>(mod, "Program")
      .def_property_readonly("num_processes",
                             [](const PyProgram& p) { return p.p.processes.size(); })
      .def("serialize", [](const PyProgram& p) { return serialize_program(p.p); })
      .def("__str__", [](const PyProgram& p) { return serialize_program(p.p); })
      .def("__repr__", [](const PyProgram& p) {
        return "<Program with " + std::to_string(p.p.processes.size()) + " processes>";
      });

  mod.def("structure_from_json", &structure_from_json, py::arg("text"),
          "parse and validate a structure from its JSON text");
  mod.def("parse_formula", [](const std::string& text) { return PyFormula{parse_formula(text)}; },
          py::arg("text"));
  mod.def("check", &check_py, py::arg("structure"), py::arg("formula"),
          "map every state name to whether the formula holds there");
  mod.def("models",
          [](const PyStructure& s, const PyFormula& f) { return models(s.m, f.f); },
          py::arg("structure"), py::arg("formula"),
          "true when every initial state satisfies the formula");
  mod.def("quotient", &quotient_py, py::arg("structure"), py::arg("generators_json"),
          "dict with the quotient structure and the representative map");
  mod.def("orbits", &orbits_py, py::arg("structure"), py::arg("generators_json"));
  mod.def("is_invariant", &is_invariant_py, py::arg("structure"), py::arg("generators_json"),
          py::arg("formula"));
  mod.def("repair", &repair_py, py::arg("structure"), py::arg("formula"),
          py::arg("require_initial") = true, py::arg("maximize") = false,
          "largest-effort deletion repair; None when no repair exists");
  mod.def("repair_symmetric", &repair_symmetric_py, py::arg("structure"),
          py::arg("generators_json"), py::arg("formula"), py::arg("require_initial") = true,
          py::arg("maximize") = false,
          "repair the quotient and lift maximally; None when no symmetric repair exists");
  mod.def("parse_program",
          [](const std::string& text) { return PyProgram{parse_program(text)}; },
          py::arg("text"));
  mod.def("make_nc_mutex",
          [](std::size_t n) { return PyProgram{make_nc_mutex_program(n)}; }, py::arg("n"));
  mod.def("make_ntc_mutex",
          [](std::size_t n) { return PyProgram{make_ntc_mutex_program(n)}; }, py::arg("n"));
  mod.def("global_structure",
          [](const PyProgram& p) { return PyStructure{global_structure(p.p).m}; },
          py::arg("program"), "interleaved global state graph");
  mod.def("reduced_structure",
          [](const PyProgram& p) {
            return PyStructure{reduced_structure(p.p, full_index_generators(p.p)).m};
          },
          py::arg("program"), "global graph collapsed along the full index symmetry");
  mod.def("repair_program", &repair_program_py, py::arg("program"), py::arg("formula"),
          py::arg("close") = "minimal", py::arg("simplify") = true, py::arg("maximize") = false,
          "reduce, repair, extract, close dead ends, and re-verify; None when unrepairable");
}
