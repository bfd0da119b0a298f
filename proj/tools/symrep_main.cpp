#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "symrep/ctl.hpp"
#include "symrep/dot.hpp"
#include "symrep/json_io.hpp"
#include "symrep/kripke.hpp"
#include "symrep/programs.hpp"
#include "symrep/repair.hpp"
#include "symrep/sat.hpp"
#include "symrep/symmetry.hpp"

namespace {

using namespace symrep;

// 0 success, 1 property violation, 2 no repair exists, >2 usage/internal
constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kNoRepair = 2;
constexpr int kUsage = 65;
constexpr int kInternal = 70;

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& m) : std::runtime_error(m), code(c) {}
};

// artifact to a file when a path is given, stdout otherwise; progress and
// summaries always go to stderr so artifact bytes stay clean
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

std::string note_target(const std::string& path) { return path.empty() ? "stdout" : path; }

CtlPtr formula_from(const std::string& text, const std::string& file) {
  if (text.empty() == file.empty())
    throw CliError(kUsage, "provide exactly one of --formula and --formula-file");
  const std::string src = text.empty() ? read_file(file) : text;
  return parse_formula(src);
}

SolverFn external_solver(const std::string& cmd) {
  return [cmd](const CnfInstance& inst) -> std::optional<std::vector<bool>> {
    char path[] = "/tmp/symrep-cnf-XXXXXX";
    const int fd = mkstemp(path);
    if (fd < 0) throw std::runtime_error("cannot create a temporary CNF file");
    close(fd);
    write_file(path, inst.to_dimacs());
    const std::string full = cmd + " " + path + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    if (pipe == nullptr) {
      std::remove(path);
      throw std::runtime_error("cannot run external solver: " + cmd);
    }
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    pclose(pipe);  // conventional solver exit codes (10/20) are not errors
    std::remove(path);
    return parse_solver_output(out, inst.num_vars);
  };
}

// interpret a structure file as a substructure of `parent` by state names
SubStructure map_substructure(const KripkeStructure& parent, const KripkeStructure& loaded) {
  SubStructure n;
  n.parent = &parent;
  for (const auto& name : loaded.names) {
    const auto id = parent.state_by_name(name);
    if (!id) throw CliError(kUsage, "state '" + name + "' does not exist in the parent");
    n.states.push_back(*id);
  }
  for (const auto& [a, b] : loaded.transitions)
    n.transitions.emplace_back(*parent.state_by_name(loaded.names[a]),
                               *parent.state_by_name(loaded.names[b]));
  n.states = sorted_unique(std::move(n.states));
  n.transitions = sorted_unique(std::move(n.transitions));
  if (!is_substructure(n, parent))
    throw CliError(kUsage, "the file is not a substructure of the parent (totality violated "
                           "or elements missing)");
  return n;
}

SymmetryGroup group_from_file(const KripkeStructure& m, const std::string& path) {
  return group_closure(m, load_group_generators(path, m));
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw CliError(kUsage, "cannot create directory '" + dir + "': " + ec.message());
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string structure, formula, formula_file, satset_out;
};

int run_check(const CheckArgs& a) {
  const KripkeStructure m = load_structure(a.structure);
  const CtlPtr f = formula_from(a.formula, a.formula_file);
  const SatSet sat = check(m, f);
  bool vacuous = false;
  const bool ok = models(m, f, &vacuous);
  if (!a.satset_out.empty()) write_file(a.satset_out, serialize_satset(sat, m));
  if (ok) {
    std::cout << "holds" << (vacuous ? " (vacuously: no initial states)" : "") << "\n";
    return kOk;
  }
  std::string bad;
  for (StateId s : m.initial)
    if (!sat.holds_at(s)) bad += (bad.empty() ? "" : ", ") + m.names[s];
  std::cout << "fails at initial state(s): " << bad << "\n";
  return kViolation;
}

struct QuotientArgs {
  std::string structure, group, out, theta_out;
};

int run_quotient(const QuotientArgs& a) {
  const KripkeStructure m = load_structure(a.structure);
  const SymmetryGroup g = group_from_file(m, a.group);
  const QuotientResult q = quotient(m, g);
  if (!check_g_bisimulation(view_of(m), view_of(q.quotient), q, g).ok())
    throw std::logic_error("quotient failed its bisimulation re-verification");
  if (!a.theta_out.empty()) write_file(a.theta_out, serialize_theta(q));
  emit(a.out, serialize_structure(q.quotient));
  std::cerr << "quotient: " << q.quotient.num_states() << " states, "
            << q.quotient.transitions.size() << " transitions (source " << m.num_states()
            << "/" << m.transitions.size() << "), group order " << g.order()
            << "; bisimulation verified; written to " << note_target(a.out) << "\n";
  return kOk;
}

struct RepairArgs {
  std::string structure, formula, formula_file, group, out, emit_cnf, solver, keep_dir,
      theta_out;
  bool require_initial = true;
  bool maximize = false;
};

int run_repair(const RepairArgs& a) {
  const KripkeStructure m = load_structure(a.structure);
  const CtlPtr f = formula_from(a.formula, a.formula_file);

  RepairOptions opts;
  opts.require_initial = a.require_initial;
  opts.maximize_retained = a.maximize;
  if (!a.emit_cnf.empty()) opts.emit_cnf_path = a.emit_cnf;
  if (!a.solver.empty()) opts.solver = external_solver(a.solver);

  if (a.group.empty()) {
    const auto r = repair(m, f, opts);
    if (!r) {
      std::cerr << "no repair exists\n";
      return kNoRepair;
    }
    emit(a.out, serialize_structure(substructure_as_structure(*r)));
    std::cerr << "repair: kept " << r->states.size() << "/" << m.num_states() << " states, "
              << r->transitions.size() << "/" << m.transitions.size()
              << " transitions; re-verified against the formula; written to "
              << note_target(a.out) << "\n";
    return kOk;
  }

  const SymmetryGroup g = group_from_file(m, a.group);
  if (!is_g_invariant(m, g, f))
    throw CliError(kUsage, "the formula is not invariant under the given group");
  const auto qr = repair_via_quotient(m, g, canonical_representative_map(g), f, opts);
  if (!qr) {
    std::cerr << "no symmetric repair exists\n";
    return kNoRepair;
  }
  if (!is_g_maximal(qr->lifted, *qr->q))
    throw std::logic_error("lifted repair is not G-maximal");
  if (!a.theta_out.empty()) write_file(a.theta_out, serialize_theta(*qr->q));
  if (!a.keep_dir.empty()) {
    ensure_dir(a.keep_dir);
    write_file(a.keep_dir + "/quotient.json", serialize_structure(qr->q->quotient));
    write_file(a.keep_dir + "/theta.json", serialize_theta(*qr->q));
    write_file(a.keep_dir + "/quotient-repair.json",
               serialize_structure(substructure_as_structure(qr->quotient_repair)));
  }
  emit(a.out, serialize_structure(substructure_as_structure(qr->lifted)));
  std::cerr << "symmetric repair: quotient kept " << qr->quotient_repair.states.size() << "/"
            << qr->q->quotient.num_states() << " states; lift kept " << qr->lifted.states.size()
            << "/" << m.num_states() << " states, " << qr->lifted.transitions.size() << "/"
            << m.transitions.size()
            << " transitions; G-maximal; re-verified against the formula; written to "
            << note_target(a.out) << "\n";
  return kOk;
}

CloseMode close_mode_from(const std::string& s) {
  if (s == "none") return CloseMode::None;
  if (s == "full") return CloseMode::Full;
  return CloseMode::Minimal;
}

std::vector<IndexPermutation> program_gens(const ConcurrentProgram& p, const std::string& kind) {
  if (kind == "trivial") return {};
  return full_index_generators(p);
}

struct RepairProgramArgs {
  std::string program, formula, formula_file, group = "full", out, emit_cnf, solver, keep_dir,
      close = "minimal";
  bool require_initial = true;
  bool maximize = false;
  bool simplify = false;
};

int run_repair_program(const RepairProgramArgs& a) {
  const ConcurrentProgram p = load_program(a.program);
  const CtlPtr f = formula_from(a.formula, a.formula_file);
  const auto gens = program_gens(p, a.group);

  const ProgramStructure red = reduced_structure(p, gens);
  std::cerr << "reduced structure: " << red.m.num_states() << " states, "
            << red.m.transitions.size() << " transitions\n";

  RepairOptions opts;
  opts.require_initial = a.require_initial;
  opts.maximize_retained = a.maximize;
  if (!a.emit_cnf.empty()) opts.emit_cnf_path = a.emit_cnf;
  if (!a.solver.empty()) opts.solver = external_solver(a.solver);

  const auto r = repair(red.m, f, opts);
  if (!r) {
    std::cerr << (gens.empty() ? "no repair exists\n" : "no symmetric repair exists\n");
    return kNoRepair;
  }
  // extraction works from behavior; kept-but-orphaned states contribute none
  const SubStructure kept = reachable_part(*r);
  if (kept.empty())
    throw CliError(kUsage, "the repair keeps no initial state, so there is no behavior "
                           "to extract (rerun with --require-initial)");
  std::cerr << "repaired: kept " << kept.states.size() << "/" << red.m.num_states()
            << " states, " << kept.transitions.size() << "/" << red.m.transitions.size()
            << " transitions\n";

  const ConcurrentProgram raw = extract_program(p, red, kept);
  const ConcurrentProgram closed = close_dead_ends(raw, gens, close_mode_from(a.close));
  const ConcurrentProgram fin =
      a.simplify ? simplify_guards(closed, p, red, gens) : closed;

  const ExtractVerification ver = verify_extracted(fin, p, red, kept, gens, f);
  if (!ver.ok())
    throw std::logic_error("extracted program failed verification (models: " +
                           std::string(ver.models_ok ? "ok" : "FAIL") +
                           ", bisimulation: " + (ver.bisim.ok() ? "ok" : "FAIL") + ")");

  if (!a.keep_dir.empty()) {
    ensure_dir(a.keep_dir);
    write_file(a.keep_dir + "/reduced.json", serialize_structure(red.m));
    write_file(a.keep_dir + "/repaired.json",
               serialize_structure(substructure_as_structure(*r)));
    write_file(a.keep_dir + "/extracted-raw.prog", serialize_program(raw));
  }
  emit(a.out, serialize_program(fin));
  std::cerr << "extracted program verified: its structure has " << ver.mprime_states
            << " states, models the formula, and is G-bisimilar to the repair; written to "
            << note_target(a.out) << "\n";
  return kOk;
}

struct ExtractArgs {
  std::string program, repaired, formula, formula_file, group = "full", out,
      close = "minimal";
  bool simplify = false;
  bool reduced = true;
};

int run_extract(const ExtractArgs& a) {
  const ConcurrentProgram p = load_program(a.program);
  const auto gens = program_gens(p, a.group);
  const ProgramStructure ps = a.reduced ? reduced_structure(p, gens) : global_structure(p);
  const SubStructure n = map_substructure(ps.m, load_structure(a.repaired));
  if (n.empty()) throw CliError(kUsage, "the repaired substructure is empty");

  const ConcurrentProgram raw = extract_program(p, ps, n);
  const ConcurrentProgram closed = close_dead_ends(raw, gens, close_mode_from(a.close));
  const ConcurrentProgram fin = a.simplify ? simplify_guards(closed, p, ps, gens) : closed;

  if (!a.formula.empty() || !a.formula_file.empty()) {
    const CtlPtr f = formula_from(a.formula, a.formula_file);
    const ExtractVerification ver = verify_extracted(fin, p, ps, n, gens, f);
    if (!ver.ok()) {
      std::cerr << "verification failed (models: " << (ver.models_ok ? "ok" : "FAIL")
                << ", bisimulation: " << (ver.bisim.ok() ? "ok" : "FAIL") << ")\n";
      return kViolation;
    }
    std::cerr << "verified: " << ver.mprime_states << " states, models the formula\n";
  } else {
    std::cerr << "note: no formula given, extraction not verified against one\n";
  }
  emit(a.out, serialize_program(fin));
  return kOk;
}

struct LatticeArgs {
  std::string structure, group;
  std::size_t max_transitions = 20;
  bool list = false;
};

int run_lattice(const LatticeArgs& a) {
  const KripkeStructure m = load_structure(a.structure);
  auto elems = enumerate_substructures(m, a.max_transitions);
  if (!a.group.empty()) {
    const SymmetryGroup g = group_from_file(m, a.group);
    std::erase_if(elems, [&](const SubStructure& n) { return !is_g_closed(n, g); });
  }
  std::cout << elems.size() << (a.group.empty() ? "" : " G-closed") << " substructures\n";
  if (a.list)
    for (const auto& n : elems) {
      std::string line = "  {";
      for (std::size_t i = 0; i < n.states.size(); ++i)
        line += (i ? "," : "") + m.names[n.states[i]];
      line += "} /";
      for (const auto& [x, y] : n.transitions)
        line += " " + m.names[x] + ">" + m.names[y];
      std::cout << line << "\n";
    }
  return kOk;
}

struct OracleArgs {
  std::string structure, formula, formula_file;
  std::size_t max_transitions = 20;
};

int run_oracle_compare(const OracleArgs& a) {
  const KripkeStructure m = load_structure(a.structure);
  if (m.transitions.size() > a.max_transitions)
    throw CliError(kUsage, "structure too large for the enumeration oracle (" +
                               std::to_string(m.transitions.size()) + " transitions)");
  const CtlPtr f = formula_from(a.formula, a.formula_file);

  RepairOptions opts;
  opts.maximize_retained = true;
  const auto viaSat = repair(m, f, opts);
  const auto viaEnum = brute_force_repair(m, f, a.max_transitions);

  auto describe = [&](const std::optional<SubStructure>& r) {
    return r ? "repair with " + std::to_string(r->transitions.size()) + " transitions"
             : std::string("no repair");
  };
  std::cout << "solver:      " << describe(viaSat) << "\n";
  std::cout << "enumeration: " << describe(viaEnum) << "\n";
  // existence must agree; sizes are informational (the solver may keep
  // orphaned states the enumeration never lists, and vice versa)
  const bool agree = viaSat.has_value() == viaEnum.has_value();
  const bool sound = (!viaSat || models(*viaSat, f)) && (!viaEnum || models(*viaEnum, f));
  std::cout << (agree && sound ? "AGREE" : "DISAGREE") << "\n";
  if (!agree || !sound)
    throw std::logic_error("repair engines disagree with the enumeration oracle");
  return kOk;
}

struct DotArgs {
  std::string structure, program, group = "full", overlay, out;
  bool reduced = false;
  bool no_state_labels = false;
};

int run_dot(const DotArgs& a) {
  if (a.structure.empty() == a.program.empty())
    throw CliError(kUsage, "provide exactly one of <structure> and --program");

  DotOptions opts;
  opts.show_labels = !a.no_state_labels;

  if (!a.program.empty()) {
    const ConcurrentProgram p = load_program(a.program);
    const auto gens = program_gens(p, a.group);
    const ProgramStructure ps = a.reduced ? reduced_structure(p, gens) : global_structure(p);
    opts.edge_labels = &ps.edge_labels;
    SubStructure over;
    if (!a.overlay.empty()) {
      over = map_substructure(ps.m, load_structure(a.overlay));
      opts.overlay = &over;
    }
    emit(a.out, to_dot(ps.m, opts));
    return kOk;
  }

  const KripkeStructure m = load_structure(a.structure);
  SubStructure over;
  if (!a.overlay.empty()) {
    over = map_substructure(m, load_structure(a.overlay));
    opts.overlay = &over;
  }
  emit(a.out, to_dot(m, opts));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetry-aware CTL model checking, repair, and program extraction"};
  app.require_subcommand(1);
  app.fallthrough();

  bool json_errors = false;
  unsigned long seed = 0;
  app.add_flag("--json-errors", json_errors, "report errors as JSON on stdout");
  app.add_option("--seed", seed, "reserved; all commands are deterministic");

  CheckArgs check_args;
  auto* c_check = app.add_subcommand("check", "evaluate a formula over a structure");
  c_check->add_option("structure", check_args.structure, "structure JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  c_check->add_option("-f,--formula", check_args.formula, "formula text");
  c_check->add_option("--formula-file", check_args.formula_file, "file with the formula")
      ->check(CLI::ExistingFile);
  c_check->add_option("--satset-out", check_args.satset_out, "write the satisfying set JSON");

  QuotientArgs quot_args;
  auto* c_quot = app.add_subcommand("quotient", "build the symmetry quotient");
  c_quot->add_option("structure", quot_args.structure, "structure JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  c_quot->add_option("--group", quot_args.group, "group generators JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  c_quot->add_option("-o,--out", quot_args.out, "quotient structure output (default stdout)");
  c_quot->add_option("--theta-out", quot_args.theta_out, "write the representative map");

  RepairArgs rep_args;
  auto* c_rep = app.add_subcommand("repair", "delete states/transitions until the formula holds");
  c_rep->add_option("structure", rep_args.structure, "structure JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  c_rep->add_option("-f,--formula", rep_args.formula, "formula text");
  c_rep->add_option("--formula-file", rep_args.formula_file, "file with the formula")
      ->check(CLI::ExistingFile);
  c_rep->add_option("--group", rep_args.group,
                    "group generators JSON file; repair the quotient and lift maximally")
      ->check(CLI::ExistingFile);
  c_rep->add_flag("--require-initial,!--no-require-initial", rep_args.require_initial,
                  "require a kept initial state (default on)");
  c_rep->add_flag("--maximize-retained", rep_args.maximize,
                  "maximize the number of kept transitions");
  c_rep->add_option("--emit-cnf", rep_args.emit_cnf, "write the DIMACS encoding");
  c_rep->add_option("--use-external-solver", rep_args.solver,
                    "run '<command> <cnf-file>' and parse its output");
  c_rep->add_option("-o,--out", rep_args.out, "repaired structure output (default stdout)");
  c_rep->add_option("--theta-out", rep_args.theta_out, "write the representative map");
  c_rep->add_option("--keep-intermediates", rep_args.keep_dir,
                    "directory for quotient/theta/quotient-repair artifacts");

  RepairProgramArgs rp_args;
  auto* c_rp = app.add_subcommand(
      "repair-program", "reduce, repair, and extract a repaired concurrent program");
  c_rp->add_option("program", rp_args.program, "program file")
      ->required()
      ->check(CLI::ExistingFile);
  c_rp->add_option("-f,--formula", rp_args.formula, "formula text");
  c_rp->add_option("--formula-file", rp_args.formula_file, "file with the formula")
      ->check(CLI::ExistingFile);
  c_rp->add_option("--group", rp_args.group, "index group: full or trivial")
      ->check(CLI::IsMember({"full", "trivial"}));
  c_rp->add_flag("--require-initial,!--no-require-initial", rp_args.require_initial,
                 "require the initial state to survive (default on)");
  c_rp->add_flag("--maximize-retained", rp_args.maximize,
                 "maximize kept transitions in the reduced repair");
  c_rp->add_option("--close", rp_args.close, "dead-end closure: minimal, full, or none")
      ->check(CLI::IsMember({"minimal", "full", "none"}));
  c_rp->add_flag("--simplify-guards", rp_args.simplify,
                 "drop guard conjuncts that cannot be observed");
  c_rp->add_option("--emit-cnf", rp_args.emit_cnf, "write the DIMACS encoding");
  c_rp->add_option("--use-external-solver", rp_args.solver,
                   "run '<command> <cnf-file>' and parse its output");
  c_rp->add_option("-o,--out", rp_args.out, "repaired program output (default stdout)");
  c_rp->add_option("--keep-intermediates", rp_args.keep_dir,
                   "directory for reduced/repaired/raw-extraction artifacts");

  ExtractArgs ex_args;
  auto* c_ex = app.add_subcommand("extract", "extract a program from a repaired substructure");
  c_ex->add_option("program", ex_args.program, "original program file")
      ->required()
      ->check(CLI::ExistingFile);
  c_ex->add_option("--repaired", ex_args.repaired,
                   "repaired substructure (structure JSON, names must match)")
      ->required()
      ->check(CLI::ExistingFile);
  c_ex->add_option("--group", ex_args.group, "index group: full or trivial")
      ->check(CLI::IsMember({"full", "trivial"}));
  c_ex->add_flag("--reduced,!--global", ex_args.reduced,
                 "interpret the substructure against the reduced (default) or global graph");
  c_ex->add_option("--close", ex_args.close, "dead-end closure: minimal, full, or none")
      ->check(CLI::IsMember({"minimal", "full", "none"}));
  c_ex->add_flag("--simplify-guards", ex_args.simplify,
                 "drop guard conjuncts that cannot be observed");
  c_ex->add_option("-f,--formula", ex_args.formula, "verify the extraction against this formula");
  c_ex->add_option("--formula-file", ex_args.formula_file, "file with the formula")
      ->check(CLI::ExistingFile);
  c_ex->add_option("-o,--out", ex_args.out, "program output (default stdout)");

  LatticeArgs lat_args;
  auto* c_lat = app.add_subcommand("lattice", "enumerate the substructure lattice");
  c_lat->add_option("structure", lat_args.structure, "structure JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  c_lat->add_option("--group", lat_args.group, "keep only G-closed elements")
      ->check(CLI::ExistingFile);
  c_lat->add_option("--max-transitions", lat_args.max_transitions,
                    "refuse larger structures (default 20)");
  c_lat->add_flag("--list", lat_args.list, "print every element");

  OracleArgs or_args;
  auto* c_or = app.add_subcommand("oracle-compare",
                                  "compare solver-based repair against exhaustive enumeration");
  c_or->add_option("structure", or_args.structure, "structure JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  c_or->add_option("-f,--formula", or_args.formula, "formula text");
  c_or->add_option("--formula-file", or_args.formula_file, "file with the formula")
      ->check(CLI::ExistingFile);
  c_or->add_option("--max-transitions", or_args.max_transitions,
                   "enumeration bound (default 20)");

  DotArgs dot_args;
  auto* c_dot = app.add_subcommand("dot", "render a structure as Graphviz DOT");
  c_dot->add_option("structure", dot_args.structure, "structure JSON file")
      ->check(CLI::ExistingFile);
  c_dot->add_option("--program", dot_args.program, "render a program's state graph instead")
      ->check(CLI::ExistingFile);
  c_dot->add_option("--group", dot_args.group, "index group for --program: full or trivial")
      ->check(CLI::IsMember({"full", "trivial"}));
  c_dot->add_flag("--reduced", dot_args.reduced, "with --program: the reduced graph");
  c_dot->add_option("--overlay", dot_args.overlay,
                    "substructure file; everything outside it renders dashed")
      ->check(CLI::ExistingFile);
  c_dot->add_flag("--no-state-labels", dot_args.no_state_labels,
                  "omit proposition sets from state labels");
  c_dot->add_option("-o,--out", dot_args.out, "DOT output (default stdout)");

  try {
    app.parse(argc, argv);

    if (app.got_subcommand(c_check)) return run_check(check_args);
    if (app.got_subcommand(c_quot)) return run_quotient(quot_args);
    if (app.got_subcommand(c_rep)) return run_repair(rep_args);
    if (app.got_subcommand(c_rp)) return run_repair_program(rp_args);
    if (app.got_subcommand(c_ex)) return run_extract(ex_args);
    if (app.got_subcommand(c_lat)) return run_lattice(lat_args);
    if (app.got_subcommand(c_or)) return run_oracle_compare(or_args);
    if (app.got_subcommand(c_dot)) return run_dot(dot_args);
    return kUsage;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const CliError& e) {
    if (json_errors) {
      std::cout << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return e.code;
  } catch (const CtlParseError& e) {
    if (json_errors) {
      std::cout << nlohmann::json{{"error", "formula"},
                                  {"message", e.what()},
                                  {"position", e.position}}
                       .dump(2)
                << "\n";
    } else {
      std::cerr << "formula error at position " << e.position << ": " << e.what() << "\n";
    }
    return kUsage;
  } catch (const std::invalid_argument& e) {
    if (json_errors) {
      std::cout << nlohmann::json{{"error", "input"}, {"message", e.what()}}.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return kUsage;
  } catch (const std::logic_error& e) {
    if (json_errors) {
      std::cout << nlohmann::json{{"error", "internal"}, {"message", e.what()}}.dump(2) << "\n";
    } else {
      std::cerr << "internal error: " << e.what() << "\n";
    }
    return kInternal;
  } catch (const std::exception& e) {
    if (json_errors) {
      std::cout << nlohmann::json{{"error", "input"}, {"message", e.what()}}.dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return kUsage;
  }
}
