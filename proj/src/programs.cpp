#include "symrep/programs.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace symrep {

// ---------------------------------------------------------------------------
// guards

namespace guard {

static GuardPtr node(GuardExpr e) { return std::make_shared<const GuardExpr>(std::move(e)); }

GuardPtr t() { return node({GuardExpr::Kind::True, "", "", nullptr, nullptr}); }
GuardPtr f() { return node({GuardExpr::Kind::False, "", "", nullptr, nullptr}); }
GuardPtr prop(std::string name) {
  return node({GuardExpr::Kind::Prop, std::move(name), "", nullptr, nullptr});
}
GuardPtr eq(std::string var, std::string value) {
  return node({GuardExpr::Kind::SharedEq, std::move(var), std::move(value), nullptr, nullptr});
}
GuardPtr not_(GuardPtr a) {
  return node({GuardExpr::Kind::Not, "", "", std::move(a), nullptr});
}
GuardPtr and_(GuardPtr a, GuardPtr b) {
  return node({GuardExpr::Kind::And, "", "", std::move(a), std::move(b)});
}
GuardPtr or_(GuardPtr a, GuardPtr b) {
  return node({GuardExpr::Kind::Or, "", "", std::move(a), std::move(b)});
}

}  // namespace guard

// precedence: | lowest, then &, then !; equality atoms parenthesized under !
static void guard_str(const GuardPtr& g, int level, std::string& out) {
  switch (g->kind) {
    case GuardExpr::Kind::True:
      out += "true";
      return;
    case GuardExpr::Kind::False:
      out += "false";
      return;
    case GuardExpr::Kind::Prop:
      out += g->name;
      return;
    case GuardExpr::Kind::SharedEq:
      if (level >= 3) {
        out += "(" + g->name + " = " + g->value + ")";
      } else {
        out += g->name + " = " + g->value;
      }
      return;
    case GuardExpr::Kind::Not:
      out += "!";
      if (g->lhs->kind == GuardExpr::Kind::And || g->lhs->kind == GuardExpr::Kind::Or) {
        out += "(";
        guard_str(g->lhs, 0, out);
        out += ")";
      } else {
        guard_str(g->lhs, 3, out);
      }
      return;
    case GuardExpr::Kind::And: {
      const bool parens = level >= 2;
      if (parens) out += "(";
      guard_str(g->lhs, 1, out);
      out += " & ";
      guard_str(g->rhs, 2, out);
      if (parens) out += ")";
      return;
    }
    case GuardExpr::Kind::Or: {
      const bool parens = level >= 1;
      if (parens) out += "(";
      guard_str(g->lhs, 0, out);
      out += " | ";
      guard_str(g->rhs, 1, out);
      if (parens) out += ")";
      return;
    }
  }
}

std::string to_string(const GuardPtr& g) {
  std::string out;
  guard_str(g, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// program model accessors

std::vector<std::string> Process::ap() const {
  std::vector<std::string> out;
  for (const auto& l : locals)
    for (const auto& q : l.props)
      if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
  return out;
}

std::optional<std::uint32_t> Process::local_index(const std::string& n) const {
  for (std::uint32_t i = 0; i < locals.size(); ++i)
    if (locals[i].name == n) return i;
  return std::nullopt;
}

std::vector<std::string> ConcurrentProgram::ap() const {
  std::vector<std::string> out;
  for (const auto& pr : processes)
    for (auto& q : pr.ap()) out.push_back(q);
  return out;
}

std::optional<std::size_t> ConcurrentProgram::shared_index(const std::string& n) const {
  for (std::size_t i = 0; i < shared.size(); ++i)
    if (shared[i].name == n) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// validation

namespace {

void validate_guard_symbols(const ConcurrentProgram& p,
                            const std::map<std::string, std::pair<std::uint32_t, std::uint32_t>>& prop_at,
                            const GuardPtr& g, std::vector<std::string>& errors,
                            const std::string& where) {
  if (!g) {
    errors.push_back(where + ": null guard");
    return;
  }
  switch (g->kind) {
    case GuardExpr::Kind::True:
    case GuardExpr::Kind::False:
      return;
    case GuardExpr::Kind::Prop:
      if (!prop_at.count(g->name))
        errors.push_back(where + ": unknown proposition '" + g->name + "'");
      return;
    case GuardExpr::Kind::SharedEq: {
      auto idx = p.shared_index(g->name);
      if (!idx) {
        errors.push_back(where + ": unknown shared variable '" + g->name + "'");
        return;
      }
      const auto& dom = p.shared[*idx].values;
      if (std::find(dom.begin(), dom.end(), g->value) == dom.end())
        errors.push_back(where + ": value '" + g->value + "' not in domain of '" + g->name + "'");
      return;
    }
    case GuardExpr::Kind::Not:
      validate_guard_symbols(p, prop_at, g->lhs, errors, where);
      return;
    case GuardExpr::Kind::And:
    case GuardExpr::Kind::Or:
      validate_guard_symbols(p, prop_at, g->lhs, errors, where);
      validate_guard_symbols(p, prop_at, g->rhs, errors, where);
      return;
  }
}

std::map<std::string, std::pair<std::uint32_t, std::uint32_t>> build_prop_map(
    const ConcurrentProgram& p, std::vector<std::string>* errors) {
  std::map<std::string, std::pair<std::uint32_t, std::uint32_t>> prop_at;
  for (std::uint32_t i = 0; i < p.processes.size(); ++i) {
    const auto api = p.processes[i].ap();
    for (std::uint32_t k = 0; k < api.size(); ++k) {
      if (prop_at.count(api[k])) {
        if (errors)
          errors->push_back("proposition '" + api[k] + "' owned by more than one process");
        continue;
      }
      prop_at[api[k]] = {i, k};
    }
  }
  return prop_at;
}

}  // namespace

ValidationReport validate_program(const ConcurrentProgram& p) {
  ValidationReport rep;
  auto err = [&](std::string m) { rep.errors.push_back(std::move(m)); };

  if (p.processes.empty()) err("program has no processes");

  std::set<std::string> shared_names;
  for (const auto& sv : p.shared) {
    if (!shared_names.insert(sv.name).second) err("duplicate shared variable '" + sv.name + "'");
    if (sv.values.empty()) err("shared variable '" + sv.name + "' has an empty domain");
    std::set<std::string> vals(sv.values.begin(), sv.values.end());
    if (vals.size() != sv.values.size())
      err("shared variable '" + sv.name + "' has duplicate domain values");
    if (!vals.count(sv.init))
      err("shared variable '" + sv.name + "' initial value '" + sv.init + "' not in domain");
  }

  const auto prop_at = build_prop_map(p, &rep.errors);

  for (std::size_t i = 0; i < p.processes.size(); ++i) {
    const auto& pr = p.processes[i];
    const std::string who = "process " + std::to_string(i + 1);
    if (pr.locals.empty()) {
      err(who + " has no local states");
      continue;
    }
    std::set<std::string> lnames;
    for (const auto& l : pr.locals) {
      if (!lnames.insert(l.name).second) err(who + ": duplicate local state '" + l.name + "'");
      std::set<std::string> ps(l.props.begin(), l.props.end());
      if (ps.size() != l.props.size())
        err(who + ": local state '" + l.name + "' lists a proposition twice");
    }
    if (!pr.local_index(pr.initial_local))
      err(who + ": initial local state '" + pr.initial_local + "' not declared");
    for (const auto& a : pr.actions) {
      const std::string where = who + " action " + a.from + " -> " + a.to;
      if (!pr.local_index(a.from)) err(where + ": unknown source local state");
      if (!pr.local_index(a.to)) err(where + ": unknown target local state");
      validate_guard_symbols(p, prop_at, a.guard, rep.errors, where);
      std::set<std::string> written;
      for (const auto& [x, v] : a.assigns) {
        auto idx = p.shared_index(x);
        if (!idx) {
          err(where + ": assignment to unknown shared variable '" + x + "'");
          continue;
        }
        if (!written.insert(x).second) err(where + ": variable '" + x + "' assigned twice");
        const auto& dom = p.shared[*idx].values;
        if (std::find(dom.begin(), dom.end(), v) == dom.end())
          err(where + ": value '" + v + "' not in domain of '" + x + "'");
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// resolved lookup tables

namespace {

struct ResolvedAction {
  std::uint32_t from, to;
  GuardPtr guard;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> assigns;  // var idx -> value idx
};

struct ProgramIndex {
  const ConcurrentProgram* p;
  std::vector<std::string> ap;
  std::map<std::string, std::pair<std::uint32_t, std::uint32_t>> prop_at;  // (process, pos)
  std::vector<std::vector<std::vector<bool>>> local_props;  // [proc][local][pos]
  std::vector<std::map<std::string, std::uint32_t>> value_idx;
  std::vector<std::vector<ResolvedAction>> acts;
  std::vector<std::vector<std::vector<std::uint32_t>>> acts_from;  // [proc][local] -> act ids

  explicit ProgramIndex(const ConcurrentProgram& prog) : p(&prog) {
    const auto rep = validate_program(prog);
    if (!rep.ok()) throw std::invalid_argument("invalid program: " + rep.errors.front());

    ap = prog.ap();
    prop_at = build_prop_map(prog, nullptr);

    local_props.resize(prog.processes.size());
    acts.resize(prog.processes.size());
    acts_from.resize(prog.processes.size());
    for (std::uint32_t i = 0; i < prog.processes.size(); ++i) {
      const auto& pr = prog.processes[i];
      const auto api = pr.ap();
      local_props[i].assign(pr.locals.size(), std::vector<bool>(api.size(), false));
      for (std::uint32_t l = 0; l < pr.locals.size(); ++l)
        for (const auto& q : pr.locals[l].props) {
          const auto at = std::find(api.begin(), api.end(), q);
          local_props[i][l][static_cast<std::size_t>(at - api.begin())] = true;
        }
      acts_from[i].assign(pr.locals.size(), {});
      for (const auto& a : pr.actions) {
        ResolvedAction ra;
        ra.from = *pr.local_index(a.from);
        ra.to = *pr.local_index(a.to);
        ra.guard = a.guard;
        for (const auto& [x, v] : a.assigns) {
          const auto xi = *prog.shared_index(x);
          const auto& dom = prog.shared[xi].values;
          const auto vi = std::find(dom.begin(), dom.end(), v) - dom.begin();
          ra.assigns.emplace_back(static_cast<std::uint32_t>(xi),
                                  static_cast<std::uint32_t>(vi));
        }
        acts_from[i][ra.from].push_back(static_cast<std::uint32_t>(acts[i].size()));
        acts[i].push_back(std::move(ra));
      }
    }
    value_idx.resize(prog.shared.size());
    for (std::size_t j = 0; j < prog.shared.size(); ++j)
      for (std::uint32_t v = 0; v < prog.shared[j].values.size(); ++v)
        value_idx[j][prog.shared[j].values[v]] = v;
  }

  [[nodiscard]] bool eval(const GuardPtr& g, const GlobalState& s) const {
    switch (g->kind) {
      case GuardExpr::Kind::True:
        return true;
      case GuardExpr::Kind::False:
        return false;
      case GuardExpr::Kind::Prop: {
        const auto [proc, pos] = prop_at.at(g->name);
        return local_props[proc][s.locals[proc]][pos];
      }
      case GuardExpr::Kind::SharedEq: {
        const auto xi = *p->shared_index(g->name);
        return s.shared[xi] == value_idx[xi].at(g->value);
      }
      case GuardExpr::Kind::Not:
        return !eval(g->lhs, s);
      case GuardExpr::Kind::And:
        return eval(g->lhs, s) && eval(g->rhs, s);
      case GuardExpr::Kind::Or:
        return eval(g->lhs, s) || eval(g->rhs, s);
    }
    return false;
  }

  // interleaving: one enabled action of one process per step
  [[nodiscard]] std::vector<std::pair<TransLabel, GlobalState>> successors(
      const GlobalState& s) const {
    std::vector<std::pair<TransLabel, GlobalState>> out;
    for (std::uint32_t i = 0; i < acts.size(); ++i)
      for (std::uint32_t ai : acts_from[i][s.locals[i]]) {
        const auto& ra = acts[i][ai];
        if (!eval(ra.guard, s)) continue;
        GlobalState u = s;
        u.locals[i] = ra.to;
        for (const auto& [x, v] : ra.assigns) u.shared[x] = v;
        out.push_back({TransLabel{i, ra.to, u.shared}, std::move(u)});
      }
    return out;
  }
};

}  // namespace

GlobalState initial_global_state(const ConcurrentProgram& p) {
  GlobalState s;
  for (const auto& pr : p.processes) {
    const auto li = pr.local_index(pr.initial_local);
    if (!li) throw std::invalid_argument("initial local state missing");
    s.locals.push_back(*li);
  }
  for (const auto& sv : p.shared) {
    const auto at = std::find(sv.values.begin(), sv.values.end(), sv.init);
    if (at == sv.values.end()) throw std::invalid_argument("initial shared value missing");
    s.shared.push_back(static_cast<std::uint32_t>(at - sv.values.begin()));
  }
  return s;
}

std::string global_state_name(const ConcurrentProgram& p, const GlobalState& s) {
  std::string out;
  for (std::size_t i = 0; i < s.locals.size(); ++i) {
    if (i) out += ",";
    out += p.processes[i].locals[s.locals[i]].name;
  }
  for (std::size_t j = 0; j < s.shared.size(); ++j)
    out += ";" + p.shared[j].name + "=" + p.shared[j].values[s.shared[j]];
  return out;
}

bool eval_guard(const ConcurrentProgram& p, const GuardPtr& g, const GlobalState& s) {
  return ProgramIndex(p).eval(g, s);
}

// ---------------------------------------------------------------------------
// state-graph generation

namespace {

ProgramStructure build_structure(const ConcurrentProgram& p, const ProgramIndex& ix,
                                 const std::vector<IndexPermutation>& gens, bool reduce,
                                 std::size_t max_states, bool check_total) {
  const GlobalState raw0 = initial_global_state(p);
  const GlobalState s0 = reduce ? canonicalize(p, gens, raw0) : raw0;

  std::set<GlobalState> seen{s0};
  std::vector<GlobalState> frontier{s0};
  std::map<std::pair<GlobalState, GlobalState>, std::set<TransLabel>> edges;

  for (std::size_t qi = 0; qi < frontier.size(); ++qi) {
    const GlobalState v = frontier[qi];
    for (auto& [label, u] : ix.successors(v)) {
      const GlobalState cu = reduce ? canonicalize(p, gens, u) : u;
      edges[{v, cu}].insert(label);
      if (seen.insert(cu).second) {
        if (seen.size() > max_states)
          throw std::runtime_error("state bound exceeded (" + std::to_string(max_states) +
                                   " states)");
        frontier.push_back(cu);
      }
    }
  }

  ProgramStructure ps;
  ps.globals.assign(seen.begin(), seen.end());  // sorted by encoding
  std::map<GlobalState, StateId> id_of;
  for (StateId i = 0; i < ps.globals.size(); ++i) id_of[ps.globals[i]] = i;

  KripkeStructure& m = ps.m;
  m.ap = ix.ap;
  for (const auto& g : ps.globals) {
    m.names.push_back(global_state_name(p, g));
    std::vector<bool> row;
    for (std::uint32_t i = 0; i < p.processes.size(); ++i)
      for (bool b : ix.local_props[i][g.locals[i]]) row.push_back(b);
    m.labels.push_back(std::move(row));
  }
  m.initial = {id_of.at(s0)};
  for (const auto& [vu, labels] : edges) {
    const Transition t{id_of.at(vu.first), id_of.at(vu.second)};
    m.transitions.push_back(t);
    ps.edge_labels[t] = std::vector<TransLabel>(labels.begin(), labels.end());
  }
  m.finalize();

  if (check_total) {
    std::string dead;
    for (StateId s = 0; s < m.num_states(); ++s)
      if (m.succ[s].empty()) dead += (dead.empty() ? "" : ", ") + m.names[s];
    if (!dead.empty())
      throw std::runtime_error("generated structure is not total; dead states: " + dead);
  }
  return ps;
}

}  // namespace

ProgramStructure global_structure(const ConcurrentProgram& p, std::size_t max_states) {
  ProgramIndex ix(p);
  return build_structure(p, ix, {}, false, max_states, true);
}

// ---------------------------------------------------------------------------
// index permutations

namespace {

// locals/AP side of the isomorphism: counts, positional prop assignments,
// initial local; enough for conjugating actions and permuting states
ValidationReport validate_perm_shape(const ConcurrentProgram& p, const IndexPermutation& g) {
  ValidationReport rep;
  auto err = [&](std::string m) { rep.errors.push_back(std::move(m)); };

  const std::size_t n = p.processes.size();
  if (g.pi.size() != n) {
    err("permutation arity " + std::to_string(g.pi.size()) + " does not match process count");
    return rep;
  }
  std::vector<bool> hit(n, false);
  for (auto v : g.pi) {
    if (v >= n || hit[v]) {
      err("pi is not a permutation of the process indices");
      return rep;
    }
    hit[v] = true;
  }
  if (!g.shared_action.empty()) {
    if (g.shared_action.size() != p.shared.size()) {
      err("shared_action arity does not match shared variable count");
      return rep;
    }
    for (std::size_t j = 0; j < p.shared.size(); ++j) {
      const std::size_t d = p.shared[j].values.size();
      if (g.shared_action[j].size() != d) {
        err("shared_action for '" + p.shared[j].name + "' has wrong arity");
        return rep;
      }
      std::vector<bool> vh(d, false);
      for (auto v : g.shared_action[j]) {
        if (v >= d || vh[v]) {
          err("shared_action for '" + p.shared[j].name + "' is not a permutation");
          return rep;
        }
        vh[v] = true;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = p.processes[i];
    const auto& b = p.processes[g.pi[i]];
    const std::string who =
        "processes " + std::to_string(i + 1) + " and " + std::to_string(g.pi[i] + 1);
    if (a.locals.size() != b.locals.size()) {
      err(who + ": local state counts differ");
      continue;
    }
    const auto apa = a.ap();
    const auto apb = b.ap();
    if (apa.size() != apb.size()) {
      err(who + ": proposition counts differ");
      continue;
    }
    if (a.local_index(a.initial_local) != b.local_index(b.initial_local))
      err(who + ": initial local states at different positions");
    for (std::size_t l = 0; l < a.locals.size(); ++l) {
      std::set<std::size_t> pa, pb;
      for (const auto& q : a.locals[l].props)
        pa.insert(static_cast<std::size_t>(std::find(apa.begin(), apa.end(), q) - apa.begin()));
      for (const auto& q : b.locals[l].props)
        pb.insert(static_cast<std::size_t>(std::find(apb.begin(), apb.end(), q) - apb.begin()));
      if (pa != pb)
        err(who + ": local states at position " + std::to_string(l) +
            " assign propositions differently");
    }
  }
  return rep;
}

GuardPtr rename_guard(const ConcurrentProgram& p, const IndexPermutation& g, const GuardPtr& e) {
  switch (e->kind) {
    case GuardExpr::Kind::True:
    case GuardExpr::Kind::False:
      return e;
    case GuardExpr::Kind::Prop: {
      const auto prop_at = build_prop_map(p, nullptr);
      const auto [proc, pos] = prop_at.at(e->name);
      return guard::prop(p.processes[g.pi[proc]].ap()[pos]);
    }
    case GuardExpr::Kind::SharedEq: {
      if (g.shared_action.empty()) return e;
      const auto xi = *p.shared_index(e->name);
      const auto& dom = p.shared[xi].values;
      const auto vi = static_cast<std::size_t>(
          std::find(dom.begin(), dom.end(), e->value) - dom.begin());
      return guard::eq(e->name, dom[g.shared_action[xi][vi]]);
    }
    case GuardExpr::Kind::Not:
      return guard::not_(rename_guard(p, g, e->lhs));
    case GuardExpr::Kind::And:
      return guard::and_(rename_guard(p, g, e->lhs), rename_guard(p, g, e->rhs));
    case GuardExpr::Kind::Or:
      return guard::or_(rename_guard(p, g, e->lhs), rename_guard(p, g, e->rhs));
  }
  return e;
}

std::string action_key(const Action& a) {
  std::string k = a.from + "\x1f" + a.to + "\x1f" + to_string(a.guard);
  for (const auto& [x, v] : a.assigns) k += "\x1f" + x + ":=" + v;
  return k;
}

// an i-action conjugated by g becomes a pi(i)-action (positional renaming)
std::pair<std::uint32_t, Action> conjugate_action(const ConcurrentProgram& p,
                                                  const IndexPermutation& g,
                                                  std::uint32_t proc, const Action& a) {
  const auto& src = p.processes[proc];
  const auto& dst = p.processes[g.pi[proc]];
  Action out;
  out.from = dst.locals[*src.local_index(a.from)].name;
  out.to = dst.locals[*src.local_index(a.to)].name;
  out.guard = rename_guard(p, g, a.guard);
  for (const auto& [x, v] : a.assigns) {
    if (g.shared_action.empty()) {
      out.assigns.emplace_back(x, v);
    } else {
      const auto xi = *p.shared_index(x);
      const auto& dom = p.shared[xi].values;
      const auto vi = static_cast<std::size_t>(
          std::find(dom.begin(), dom.end(), v) - dom.begin());
      out.assigns.emplace_back(x, dom[g.shared_action[xi][vi]]);
    }
  }
  return {g.pi[proc], std::move(out)};
}

}  // namespace

ValidationReport validate_index_permutation(const ConcurrentProgram& p,
                                            const IndexPermutation& g) {
  ValidationReport rep = validate_perm_shape(p, g);
  if (!rep.ok()) return rep;

  // a full automorphism also fixes initial shared values and maps action
  // sets onto each other
  if (!g.shared_action.empty())
    for (std::size_t j = 0; j < p.shared.size(); ++j) {
      const auto& dom = p.shared[j].values;
      const auto init = static_cast<std::size_t>(
          std::find(dom.begin(), dom.end(), p.shared[j].init) - dom.begin());
      if (g.shared_action[j][init] != init)
        rep.errors.push_back("shared_action moves the initial value of '" + p.shared[j].name +
                             "'");
    }

  for (std::uint32_t i = 0; i < p.processes.size(); ++i) {
    std::set<std::string> expect;
    for (const auto& b : p.processes[g.pi[i]].actions) expect.insert(action_key(b));
    std::set<std::string> got;
    for (const auto& a : p.processes[i].actions)
      got.insert(action_key(conjugate_action(p, g, i, a).second));
    if (expect != got)
      rep.errors.push_back("processes " + std::to_string(i + 1) + " and " +
                           std::to_string(g.pi[i] + 1) +
                           " are not isomorphic under the renaming (action sets differ)");
  }
  return rep;
}

IndexPermutation identity_index_permutation(const ConcurrentProgram& p) {
  IndexPermutation g;
  for (std::uint32_t i = 0; i < p.processes.size(); ++i) g.pi.push_back(i);
  return g;
}

IndexPermutation compose(const ConcurrentProgram& p, const IndexPermutation& f,
                         const IndexPermutation& g) {
  IndexPermutation out;
  out.pi.resize(p.processes.size());
  for (std::uint32_t i = 0; i < p.processes.size(); ++i) out.pi[i] = f.pi[g.pi[i]];
  if (!f.shared_action.empty() || !g.shared_action.empty()) {
    out.shared_action.resize(p.shared.size());
    for (std::size_t j = 0; j < p.shared.size(); ++j) {
      const std::size_t d = p.shared[j].values.size();
      out.shared_action[j].resize(d);
      for (std::uint32_t v = 0; v < d; ++v) {
        const std::uint32_t gv = g.shared_action.empty() ? v : g.shared_action[j][v];
        out.shared_action[j][v] = f.shared_action.empty() ? gv : f.shared_action[j][gv];
      }
    }
  }
  return out;
}

std::vector<IndexPermutation> full_index_generators(const ConcurrentProgram& p) {
  std::vector<IndexPermutation> gens;
  for (std::uint32_t i = 0; i + 1 < p.processes.size(); ++i) {
    IndexPermutation g = identity_index_permutation(p);
    std::swap(g.pi[i], g.pi[i + 1]);
    gens.push_back(std::move(g));
  }
  return gens;
}

std::vector<IndexPermutation> index_group_closure(const ConcurrentProgram& p,
                                                  std::vector<IndexPermutation> gens,
                                                  std::size_t bound) {
  for (const auto& g : gens) {
    const auto rep = validate_perm_shape(p, g);
    if (!rep.ok()) throw std::invalid_argument("invalid index permutation: " + rep.errors.front());
  }
  std::set<IndexPermutation> seen{identity_index_permutation(p)};
  std::vector<IndexPermutation> frontier(seen.begin(), seen.end());
  for (std::size_t qi = 0; qi < frontier.size(); ++qi) {
    const IndexPermutation cur = frontier[qi];
    for (const auto& g : gens) {
      IndexPermutation nxt = compose(p, g, cur);
      if (seen.insert(nxt).second) {
        if (seen.size() > bound) throw std::runtime_error("index group exceeds bound");
        frontier.push_back(std::move(nxt));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

GlobalState apply_index_permutation(const ConcurrentProgram&, const IndexPermutation& g,
                                    const GlobalState& s) {
  GlobalState r = s;
  for (std::uint32_t i = 0; i < g.pi.size(); ++i) r.locals[g.pi[i]] = s.locals[i];
  if (!g.shared_action.empty())
    for (std::size_t j = 0; j < s.shared.size(); ++j)
      r.shared[j] = g.shared_action[j][s.shared[j]];
  return r;
}

StateMapping index_group_action(const ConcurrentProgram& p, const ProgramStructure& ps,
                                const IndexPermutation& g) {
  const auto rep = validate_index_permutation(p, g);
  if (!rep.ok()) throw std::invalid_argument("invalid index permutation: " + rep.errors.front());

  StateMapping sm;
  sm.map.resize(ps.globals.size());
  for (StateId s = 0; s < ps.globals.size(); ++s) {
    const GlobalState t = apply_index_permutation(p, g, ps.globals[s]);
    const auto at = std::lower_bound(ps.globals.begin(), ps.globals.end(), t);
    if (at == ps.globals.end() || *at != t)
      throw std::logic_error("permuted state is not in the structure");
    sm.map[s] = static_cast<StateId>(at - ps.globals.begin());
  }
  return sm;
}

GlobalState canonicalize(const ConcurrentProgram& p, const std::vector<IndexPermutation>& gens,
                         const GlobalState& s, std::size_t orbit_bound) {
  GlobalState best = s;
  std::set<GlobalState> seen{s};
  std::vector<GlobalState> frontier{s};
  for (std::size_t qi = 0; qi < frontier.size(); ++qi) {
    const GlobalState cur = frontier[qi];
    for (const auto& g : gens) {
      GlobalState nxt = apply_index_permutation(p, g, cur);
      if (seen.insert(nxt).second) {
        if (seen.size() > orbit_bound) throw std::runtime_error("orbit bound exceeded");
        if (nxt < best) best = nxt;
        frontier.push_back(std::move(nxt));
      }
    }
  }
  return best;
}

ProgramStructure reduced_structure(const ConcurrentProgram& p,
                                   const std::vector<IndexPermutation>& gens,
                                   std::size_t max_states) {
  ProgramIndex ix(p);
  for (const auto& g : gens) {
    const auto rep = validate_index_permutation(p, g);
    if (!rep.ok()) throw std::invalid_argument("invalid index permutation: " + rep.errors.front());
  }
  return build_structure(p, ix, gens, true, max_states, true);
}

// ---------------------------------------------------------------------------
// extraction

namespace {

Action extract_action_ix(const ConcurrentProgram& p, const ProgramIndex& ix,
                         const ProgramStructure& ps, StateId from, const TransLabel& label) {
  if (from >= ps.globals.size()) throw std::invalid_argument("state id out of range");
  if (label.process >= p.processes.size()) throw std::invalid_argument("bad process label");
  const GlobalState& v = ps.globals[from];
  GlobalState u = v;
  u.locals[label.process] = label.to_local;
  u.shared = label.shared_after;

  Action a;
  a.from = p.processes[label.process].locals[v.locals[label.process]].name;
  a.to = p.processes[label.process].locals[label.to_local].name;

  // pin every other process's propositions and every shared value at v
  GuardPtr g;
  auto conj = [&](const GuardPtr& lit) { g = g ? guard::and_(g, lit) : lit; };
  for (std::uint32_t j = 0; j < p.processes.size(); ++j) {
    if (j == label.process) continue;
    const auto apj = p.processes[j].ap();
    for (std::uint32_t k = 0; k < apj.size(); ++k)
      conj(ix.local_props[j][v.locals[j]][k] ? guard::prop(apj[k])
                                             : guard::not_(guard::prop(apj[k])));
  }
  for (std::size_t x = 0; x < p.shared.size(); ++x)
    conj(guard::eq(p.shared[x].name, p.shared[x].values[v.shared[x]]));
  a.guard = g ? g : guard::t();

  for (std::size_t x = 0; x < p.shared.size(); ++x)
    if (u.shared[x] != v.shared[x])
      a.assigns.emplace_back(p.shared[x].name, p.shared[x].values[u.shared[x]]);
  return a;
}

void sort_actions(const Process& pr, std::vector<Action>& acts) {
  std::sort(acts.begin(), acts.end(), [&](const Action& a, const Action& b) {
    const auto ka = std::make_tuple(*pr.local_index(a.from), *pr.local_index(a.to), action_key(a));
    const auto kb = std::make_tuple(*pr.local_index(b.from), *pr.local_index(b.to), action_key(b));
    return ka < kb;
  });
}

}  // namespace

Action extract_action(const ConcurrentProgram& p, const ProgramStructure& ps, StateId from,
                      const TransLabel& label) {
  ProgramIndex ix(p);
  return extract_action_ix(p, ix, ps, from, label);
}

ConcurrentProgram extract_program(const ConcurrentProgram& p, const ProgramStructure& ps,
                                  const SubStructure& nprime) {
  if (nprime.parent != &ps.m)
    throw std::invalid_argument("substructure does not belong to the given structure");
  if (nprime.empty()) throw std::invalid_argument("cannot extract from an empty substructure");

  ProgramIndex ix(p);
  ConcurrentProgram out = p;
  std::vector<std::set<std::string>> have(p.processes.size());
  for (auto& pr : out.processes) pr.actions.clear();

  for (const auto& t : nprime.transitions) {
    const auto at = ps.edge_labels.find(t);
    if (at == ps.edge_labels.end() || at->second.empty())
      throw std::invalid_argument("kept transition " + ps.m.names[t.first] + " -> " +
                                  ps.m.names[t.second] + " carries no process label");
    for (const auto& label : at->second) {
      Action a = extract_action_ix(p, ix, ps, t.first, label);
      if (have[label.process].insert(action_key(a)).second)
        out.processes[label.process].actions.push_back(std::move(a));
    }
  }
  for (auto& pr : out.processes) sort_actions(pr, pr.actions);
  return out;
}

// ---------------------------------------------------------------------------
// dead-end closure

namespace {

// reachable global states of the program, dead ends allowed
std::set<GlobalState> reachable_states(const ProgramIndex& ix, const GlobalState& s0,
                                       std::size_t max_states = 1u << 20) {
  std::set<GlobalState> seen{s0};
  std::vector<GlobalState> frontier{s0};
  for (std::size_t qi = 0; qi < frontier.size(); ++qi) {
    for (auto& [label, u] : ix.successors(frontier[qi]))
      if (seen.insert(u).second) {
        if (seen.size() > max_states) throw std::runtime_error("state bound exceeded");
        frontier.push_back(std::move(u));
      }
  }
  return seen;
}

// (process, local) pairs reachable in the product with no outgoing action
std::vector<std::pair<std::uint32_t, std::uint32_t>> dead_local_states(
    const ConcurrentProgram& p, const std::set<GlobalState>& reach) {
  std::vector<std::set<std::uint32_t>> with_action(p.processes.size());
  for (std::uint32_t i = 0; i < p.processes.size(); ++i)
    for (const auto& a : p.processes[i].actions)
      with_action[i].insert(*p.processes[i].local_index(a.from));

  std::set<std::pair<std::uint32_t, std::uint32_t>> dead;
  for (const auto& s : reach)
    for (std::uint32_t i = 0; i < p.processes.size(); ++i)
      if (!with_action[i].count(s.locals[i])) dead.insert({i, s.locals[i]});
  return {dead.begin(), dead.end()};
}

}  // namespace

ConcurrentProgram close_dead_ends(const ConcurrentProgram& extracted,
                                  const std::vector<IndexPermutation>& gens, CloseMode mode) {
  if (mode == CloseMode::None) return extracted;
  for (const auto& g : gens) {
    const auto rep = validate_perm_shape(extracted, g);
    if (!rep.ok()) throw std::invalid_argument("invalid index permutation: " + rep.errors.front());
  }
  const auto elements = index_group_closure(extracted, gens);
  ConcurrentProgram out = extracted;

  std::vector<std::set<std::string>> have(out.processes.size());
  for (std::uint32_t i = 0; i < out.processes.size(); ++i)
    for (const auto& a : out.processes[i].actions) have[i].insert(action_key(a));

  if (mode == CloseMode::Full) {
    for (const auto& e : elements)
      for (std::uint32_t i = 0; i < extracted.processes.size(); ++i)
        for (const auto& a : extracted.processes[i].actions) {
          auto [j, conj] = conjugate_action(extracted, e, i, a);
          if (have[j].insert(action_key(conj)).second)
            out.processes[j].actions.push_back(std::move(conj));
        }
    const auto reach = reachable_states(ProgramIndex(out), initial_global_state(out));
    const auto dead = dead_local_states(out, reach);
    if (!dead.empty())
      throw std::runtime_error("dead end survives full closure: process " +
                               std::to_string(dead.front().first + 1) + " local state '" +
                               out.processes[dead.front().first]
                                   .locals[dead.front().second]
                                   .name +
                               "' (input is not symmetric)");
    for (auto& pr : out.processes) sort_actions(pr, pr.actions);
    return out;
  }

  // minimal: patch one dead end per round with the first conjugate that fits
  while (true) {
    const auto reach = reachable_states(ProgramIndex(out), initial_global_state(out));
    const auto dead = dead_local_states(out, reach);
    if (dead.empty()) break;
    const auto [di, dl] = dead.front();
    std::optional<Action> patch;
    for (const auto& e : elements) {
      for (std::uint32_t i = 0; i < out.processes.size() && !patch; ++i)
        for (const auto& a : out.processes[i].actions) {
          auto [j, conj] = conjugate_action(out, e, i, a);
          if (j != di || *out.processes[j].local_index(conj.from) != dl) continue;
          if (!have[j].insert(action_key(conj)).second) continue;
          patch = std::move(conj);
          break;
        }
      if (patch) break;
    }
    if (patch)
      out.processes[di].actions.push_back(std::move(*patch));
    else
      throw std::runtime_error("dead end cannot be closed: process " + std::to_string(di + 1) +
                               " local state '" + out.processes[di].locals[dl].name +
                               "' (input is not symmetric)");
  }
  for (auto& pr : out.processes) sort_actions(pr, pr.actions);
  return out;
}

// ---------------------------------------------------------------------------
// guard simplification

namespace {

// flatten a pure conjunction of literals; nullopt when the guard is anything else
std::optional<std::vector<GuardPtr>> flatten_conjunction(const GuardPtr& g) {
  const auto is_literal = [](const GuardPtr& e) {
    if (e->kind == GuardExpr::Kind::Prop || e->kind == GuardExpr::Kind::SharedEq ||
        e->kind == GuardExpr::Kind::True || e->kind == GuardExpr::Kind::False)
      return true;
    return e->kind == GuardExpr::Kind::Not && (e->lhs->kind == GuardExpr::Kind::Prop ||
                                               e->lhs->kind == GuardExpr::Kind::SharedEq);
  };
  std::vector<GuardPtr> stack{g};
  std::vector<GuardPtr> ordered;
  while (!stack.empty()) {  // left-to-right: expand with explicit ordering
    GuardPtr cur = stack.back();
    stack.pop_back();
    if (cur->kind == GuardExpr::Kind::And) {
      stack.push_back(cur->rhs);
      stack.push_back(cur->lhs);
    } else if (is_literal(cur)) {
      ordered.push_back(cur);
    } else {
      return std::nullopt;
    }
  }
  return ordered;
}

GuardPtr rebuild_conjunction(const std::vector<GuardPtr>& lits) {
  GuardPtr g;
  for (const auto& l : lits) g = g ? guard::and_(g, l) : l;
  return g ? g : guard::t();
}

}  // namespace

ConcurrentProgram simplify_guards(const ConcurrentProgram& extracted,
                                  const ConcurrentProgram& original,
                                  const ProgramStructure& ps,
                                  const std::vector<IndexPermutation>& gens) {
  for (const auto& g : gens) {
    const auto rep = validate_perm_shape(original, g);
    if (!rep.ok()) throw std::invalid_argument("invalid index permutation: " + rep.errors.front());
  }
  // universe: orbit closure of the structure's states; the extracted program
  // only ever runs inside it, so agreement there preserves behavior
  std::set<GlobalState> universe;
  for (const auto& s : ps.globals) {
    std::vector<GlobalState> frontier{s};
    universe.insert(s);
    for (std::size_t qi = 0; qi < frontier.size(); ++qi) {
      const GlobalState cur = frontier[qi];
      for (const auto& g : gens) {
        GlobalState nxt = apply_index_permutation(original, g, cur);
        if (universe.insert(nxt).second) frontier.push_back(std::move(nxt));
      }
    }
  }

  ProgramIndex ix(extracted);
  ConcurrentProgram out = extracted;
  for (auto& pr : out.processes) {
    std::vector<Action> acts;
    std::set<std::string> have;
    for (auto& a : pr.actions) {
      auto lits = flatten_conjunction(a.guard);
      if (lits) {
        std::vector<GuardPtr> kept = *lits;
        for (std::size_t i = 0; i < kept.size();) {
          std::vector<GuardPtr> without = kept;
          without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
          const GuardPtr w = rebuild_conjunction(without);
          const GuardPtr full = rebuild_conjunction(kept);
          bool same = true;
          for (const auto& u : universe)
            if (ix.eval(w, u) != ix.eval(full, u)) {
              same = false;
              break;
            }
          if (same) {
            kept = std::move(without);
          } else {
            ++i;
          }
        }
        a.guard = rebuild_conjunction(kept);
      }
      if (have.insert(action_key(a)).second) acts.push_back(a);
    }
    pr.actions = std::move(acts);
    sort_actions(pr, pr.actions);
  }
  return out;
}

// ---------------------------------------------------------------------------
// end-to-end verification

ExtractVerification verify_extracted(const ConcurrentProgram& prog_hat,
                                     const ConcurrentProgram& original,
                                     const ProgramStructure& ps, const SubStructure& nprime,
                                     const std::vector<IndexPermutation>& gens,
                                     const CtlPtr& f) {
  if (nprime.parent != &ps.m)
    throw std::invalid_argument("substructure does not belong to the given structure");

  ExtractVerification ver;
  ProgramStructure mp;
  try {
    mp = global_structure(prog_hat);
  } catch (const std::runtime_error&) {
    // the candidate's own global graph is broken (dead states or blowup);
    // that is a verification verdict, not a caller error
    ver.models_ok = false;
    ver.bisim.pairs_valid = false;
    return ver;
  }
  ver.mprime_states = mp.m.num_states();
  ver.models_ok = models(mp.m, f);

  const KripkeView vm = view_of(mp.m);
  const KripkeView vq = view_of(nprime);

  // partner of an M' state: the kept state carrying its canonical name
  const auto partner = [&](std::uint32_t mi) -> std::optional<std::uint32_t> {
    const GlobalState c = canonicalize(original, gens, mp.globals[vm.states[mi]]);
    const auto id = nprime.parent->state_by_name(global_state_name(original, c));
    if (!id || vq.index_of[*id] < 0) return std::nullopt;
    return static_cast<std::uint32_t>(vq.index_of[*id]);
  };

  std::vector<std::pair<std::uint32_t, std::uint32_t>> rel;
  bool missing = false;
  for (std::uint32_t i = 0; i < vm.size(); ++i) {
    const auto j = partner(i);
    if (!j) {
      missing = true;
      continue;
    }
    rel.emplace_back(i, *j);
  }
  const auto same_orbit = [&](std::uint32_t i, std::uint32_t j) {
    const GlobalState c = canonicalize(original, gens, mp.globals[vm.states[i]]);
    return nprime.parent->names[vq.states[j]] == global_state_name(original, c);
  };
  ver.bisim = check_g_bisimulation(vm, vq, rel, partner, same_orbit);
  if (missing) ver.bisim.pairs_valid = false;
  return ver;
}

// ---------------------------------------------------------------------------
// example families

ConcurrentProgram make_nc_mutex_program(std::size_t n) {
  ConcurrentProgram p;
  p.name = "mutex-nc-" + std::to_string(n);
  for (std::size_t i = 1; i <= n; ++i) {
    Process pr;
    const std::string sfx = std::to_string(i);
    pr.locals.push_back({"N", {"n" + sfx}});
    pr.locals.push_back({"C", {"c" + sfx}});
    pr.initial_local = "N";
    pr.actions.push_back({"N", "C", guard::t(), {}});
    pr.actions.push_back({"C", "N", guard::t(), {}});
    p.processes.push_back(std::move(pr));
  }
  return p;
}

ConcurrentProgram make_ntc_mutex_program(std::size_t n) {
  ConcurrentProgram p;
  p.name = "mutex-ntc-" + std::to_string(n);
  for (std::size_t i = 1; i <= n; ++i) {
    Process pr;
    const std::string sfx = std::to_string(i);
    pr.locals.push_back({"N", {"n" + sfx}});
    pr.locals.push_back({"T", {"t" + sfx}});
    pr.locals.push_back({"C", {"c" + sfx}});
    pr.initial_local = "N";
    pr.actions.push_back({"N", "T", guard::t(), {}});
    pr.actions.push_back({"T", "C", guard::t(), {}});
    pr.actions.push_back({"C", "N", guard::t(), {}});
    p.processes.push_back(std::move(pr));
  }
  return p;
}

}  // namespace symrep
