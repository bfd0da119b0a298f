#include "symrep/repair.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace symrep {

namespace {

CtlPtr pnf_rec(const CtlPtr& f, bool neg) {
  switch (f->kind) {
    case CtlKind::True:
      return neg ? ctl::f() : ctl::t();
    case CtlKind::False:
      return neg ? ctl::t() : ctl::f();
    case CtlKind::Prop:
      return neg ? ctl::not_(ctl::prop(f->prop)) : ctl::prop(f->prop);
    case CtlKind::Not:
      return pnf_rec(f->lhs, !neg);
    case CtlKind::And:
      return neg ? ctl::or_(pnf_rec(f->lhs, true), pnf_rec(f->rhs, true))
                 : ctl::and_(pnf_rec(f->lhs, false), pnf_rec(f->rhs, false));
    case CtlKind::Or:
      return neg ? ctl::and_(pnf_rec(f->lhs, true), pnf_rec(f->rhs, true))
                 : ctl::or_(pnf_rec(f->lhs, false), pnf_rec(f->rhs, false));
    case CtlKind::AX:
      return neg ? ctl::ex(pnf_rec(f->lhs, true)) : ctl::ax(pnf_rec(f->lhs, false));
    case CtlKind::EX:
      return neg ? ctl::ax(pnf_rec(f->lhs, true)) : ctl::ex(pnf_rec(f->lhs, false));
    case CtlKind::AR:
      return neg ? ctl::eu(pnf_rec(f->lhs, true), pnf_rec(f->rhs, true))
                 : ctl::ar(pnf_rec(f->lhs, false), pnf_rec(f->rhs, false));
    case CtlKind::ER:
      return neg ? ctl::au(pnf_rec(f->lhs, true), pnf_rec(f->rhs, true))
                 : ctl::er(pnf_rec(f->lhs, false), pnf_rec(f->rhs, false));
    case CtlKind::AU:
      return neg ? ctl::er(pnf_rec(f->lhs, true), pnf_rec(f->rhs, true))
                 : ctl::au(pnf_rec(f->lhs, false), pnf_rec(f->rhs, false));
    case CtlKind::EU:
      return neg ? ctl::ar(pnf_rec(f->lhs, true), pnf_rec(f->rhs, true))
                 : ctl::eu(pnf_rec(f->lhs, false), pnf_rec(f->rhs, false));
  }
  throw std::logic_error("unhandled formula kind");
}

// All satisfaction clauses are one-directional (variable true forces the
// semantics at kept states); greatest fixpoints are safe that way, least
// fixpoints additionally carry rank levels so every claimed witness is
// well founded.
struct Encoder {
  const KripkeStructure& m;
  RepairEncoding enc;
  std::vector<std::vector<std::size_t>> out_edges;  // state -> transition indices
  std::map<std::pair<std::string, std::size_t>, int> step_cache;

  explicit Encoder(const KripkeStructure& m_) : m(m_) {
    enc.levels = static_cast<int>(m.num_states());
    out_edges.assign(m.num_states(), {});
    for (std::size_t i = 0; i < m.transitions.size(); ++i)
      out_edges[m.transitions[i].first].push_back(i);
  }

  void allocate_keeps() {
    for (StateId s = 0; s < m.num_states(); ++s)
      enc.keep_state.push_back(enc.cnf.new_var("ks " + m.names[s]));
    for (const auto& [a, b] : m.transitions)
      enc.keep_trans.push_back(enc.cnf.new_var("kt " + m.names[a] + " -> " + m.names[b]));
  }

  void add_structural(bool require_initial) {
    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
      enc.cnf.add_clause({-enc.keep_trans[i], enc.keep_state[m.transitions[i].first]});
      enc.cnf.add_clause({-enc.keep_trans[i], enc.keep_state[m.transitions[i].second]});
    }
    for (StateId s = 0; s < m.num_states(); ++s) {
      std::vector<int> total{-enc.keep_state[s]};
      for (std::size_t i : out_edges[s]) total.push_back(enc.keep_trans[i]);
      enc.cnf.add_clause(std::move(total));
    }
    std::vector<int> witness;
    if (require_initial) {
      for (StateId s : m.initial) witness.push_back(enc.keep_state[s]);
    } else {
      for (int v : enc.keep_state) witness.push_back(v);
    }
    enc.cnf.add_clause(std::move(witness));
  }

  // aux var equivalent to "transition ti kept and child_var holds there";
  // shared across operators via (child tag, transition) identity
  int step_var(const std::string& child_tag, std::size_t ti, int child_var_at_target) {
    const auto cache_key = std::make_pair(child_tag, ti);
    if (auto it = step_cache.find(cache_key); it != step_cache.end()) return it->second;
    const auto& [a, b] = m.transitions[ti];
    const int v =
        enc.cnf.new_var("step " + m.names[a] + " -> " + m.names[b] + " : " + child_tag);
    enc.cnf.add_clause({-v, enc.keep_trans[ti]});
    enc.cnf.add_clause({-v, child_var_at_target});
    step_cache.emplace(cache_key, v);
    return v;
  }

  std::vector<int> new_var_row(const std::string& prefix, const std::string& key) {
    std::vector<int> row(m.num_states());
    for (StateId s = 0; s < m.num_states(); ++s)
      row[s] = enc.cnf.new_var(prefix + " " + m.names[s] + " |= " + key);
    return row;
  }

  const std::vector<int>& node_vars(const CtlPtr& f) {
    const std::string key = ctl_key(f);
    if (auto it = enc.y_vars.find(key); it != enc.y_vars.end()) return it->second;

    const std::vector<int>* a = nullptr;
    const std::vector<int>* b = nullptr;
    switch (f->kind) {
      case CtlKind::True:
      case CtlKind::False:
      case CtlKind::Prop:
      case CtlKind::Not:  // negated proposition in normal form
        break;
      case CtlKind::AX:
      case CtlKind::EX:
        a = &node_vars(f->lhs);
        break;
      default:
        a = &node_vars(f->lhs);
        b = &node_vars(f->rhs);
        break;
    }

    const std::size_t n = m.num_states();
    const std::vector<int>& y = enc.y_vars.emplace(key, new_var_row("y", key)).first->second;

    switch (f->kind) {
      case CtlKind::True:
        break;
      case CtlKind::False:
        for (StateId s = 0; s < n; ++s) enc.cnf.add_clause({-y[s]});
        break;
      case CtlKind::Prop: {
        const auto p = m.ap_index(f->prop);
        if (!p) throw std::invalid_argument("unknown proposition: " + f->prop);
        for (StateId s = 0; s < n; ++s)
          if (!m.labels[s][*p]) enc.cnf.add_clause({-y[s]});
        break;
      }
      case CtlKind::Not: {
        if (f->lhs->kind != CtlKind::Prop)
          throw std::invalid_argument("encoder requires positive normal form");
        const auto p = m.ap_index(f->lhs->prop);
        if (!p) throw std::invalid_argument("unknown proposition: " + f->lhs->prop);
        for (StateId s = 0; s < n; ++s)
          if (m.labels[s][*p]) enc.cnf.add_clause({-y[s]});
        break;
      }
      case CtlKind::And:
        for (StateId s = 0; s < n; ++s) {
          enc.cnf.add_clause({-y[s], (*a)[s]});
          enc.cnf.add_clause({-y[s], (*b)[s]});
        }
        break;
      case CtlKind::Or:
        for (StateId s = 0; s < n; ++s) enc.cnf.add_clause({-y[s], (*a)[s], (*b)[s]});
        break;
      case CtlKind::AX:
        for (StateId s = 0; s < n; ++s)
          for (std::size_t i : out_edges[s])
            enc.cnf.add_clause(
                {-y[s], -enc.keep_trans[i], (*a)[m.transitions[i].second]});
        break;
      case CtlKind::EX: {
        const std::string child = ctl_key(f->lhs);
        for (StateId s = 0; s < n; ++s) {
          std::vector<int> cl{-y[s]};
          for (std::size_t i : out_edges[s])
            cl.push_back(step_var(child, i, (*a)[m.transitions[i].second]));
          enc.cnf.add_clause(std::move(cl));
        }
        break;
      }
      case CtlKind::AR:
        // y -> psi now; y and phi not triggered -> y at every kept successor
        for (StateId s = 0; s < n; ++s) {
          enc.cnf.add_clause({-y[s], (*b)[s]});
          for (std::size_t i : out_edges[s])
            enc.cnf.add_clause(
                {-y[s], (*a)[s], -enc.keep_trans[i], y[m.transitions[i].second]});
        }
        break;
      case CtlKind::ER:
        for (StateId s = 0; s < n; ++s) {
          enc.cnf.add_clause({-y[s], (*b)[s]});
          std::vector<int> cl{-y[s], (*a)[s]};
          for (std::size_t i : out_edges[s])
            cl.push_back(step_var(key, i, y[m.transitions[i].second]));
          enc.cnf.add_clause(std::move(cl));
        }
        break;
      case CtlKind::EU: {
        // rank k: a witness path of length at most k reaches psi through phi
        std::vector<std::vector<int>> lvl;
        for (int k = 0; k < enc.levels; ++k)
          lvl.push_back(new_var_row("rank<=" + std::to_string(k), key));
        for (StateId s = 0; s < n; ++s) {
          enc.cnf.add_clause({-y[s], lvl[enc.levels - 1][s]});
          enc.cnf.add_clause({-lvl[0][s], (*b)[s]});
        }
        for (int k = 1; k < enc.levels; ++k) {
          const std::string tag = key + " @" + std::to_string(k - 1);
          for (StateId s = 0; s < n; ++s) {
            enc.cnf.add_clause({-lvl[k][s], (*b)[s], (*a)[s]});
            std::vector<int> cl{-lvl[k][s], (*b)[s]};
            for (std::size_t i : out_edges[s])
              cl.push_back(step_var(tag, i, lvl[k - 1][m.transitions[i].second]));
            enc.cnf.add_clause(std::move(cl));
          }
        }
        break;
      }
      case CtlKind::AU: {
        // rank k: every kept path reaches psi within k steps, phi before that
        std::vector<std::vector<int>> lvl;
        for (int k = 0; k < enc.levels; ++k)
          lvl.push_back(new_var_row("rank<=" + std::to_string(k), key));
        for (StateId s = 0; s < n; ++s) {
          enc.cnf.add_clause({-y[s], lvl[enc.levels - 1][s]});
          enc.cnf.add_clause({-lvl[0][s], (*b)[s]});
        }
        for (int k = 1; k < enc.levels; ++k) {
          for (StateId s = 0; s < n; ++s) {
            const int c = enc.cnf.new_var("au-step " + std::to_string(k) + " " +
                                          m.names[s] + " |= " + key);
            enc.cnf.add_clause({-lvl[k][s], (*b)[s], c});
            enc.cnf.add_clause({-c, (*a)[s]});
            for (std::size_t i : out_edges[s])
              enc.cnf.add_clause(
                  {-c, -enc.keep_trans[i], lvl[k - 1][m.transitions[i].second]});
          }
        }
        break;
      }
    }
    return y;
  }
};

}  // namespace

CtlPtr to_pnf(const CtlPtr& f) { return pnf_rec(f, false); }

bool is_pnf(const CtlPtr& f) {
  switch (f->kind) {
    case CtlKind::True:
    case CtlKind::False:
    case CtlKind::Prop:
      return true;
    case CtlKind::Not:
      return f->lhs->kind == CtlKind::Prop;
    case CtlKind::AX:
    case CtlKind::EX:
      return is_pnf(f->lhs);
    case CtlKind::And:
    case CtlKind::Or:
    case CtlKind::AR:
    case CtlKind::ER:
    case CtlKind::AU:
    case CtlKind::EU:
      return is_pnf(f->lhs) && is_pnf(f->rhs);
  }
  return false;
}

RepairEncoding encode_repair(const KripkeStructure& m, const CtlPtr& pnf,
                             bool require_initial) {
  if (!is_pnf(pnf)) throw std::invalid_argument("encoder requires positive normal form");
  const auto report = validate_structure(m);
  if (!report.ok()) throw std::invalid_argument("invalid structure: " + report.errors.front());

  Encoder e(m);
  e.allocate_keeps();
  e.add_structural(require_initial);
  const std::vector<int>& root = e.node_vars(pnf);
  for (StateId s : m.initial) e.enc.cnf.add_clause({-e.enc.keep_state[s], root[s]});
  return std::move(e.enc);
}

SubStructure decode_model(const KripkeStructure& m, const RepairEncoding& enc,
                          const std::vector<bool>& model) {
  SubStructure n;
  n.parent = &m;
  for (StateId s = 0; s < m.num_states(); ++s)
    if (model[static_cast<std::size_t>(enc.keep_state[s]) - 1]) n.states.push_back(s);
  for (std::size_t i = 0; i < m.transitions.size(); ++i)
    if (model[static_cast<std::size_t>(enc.keep_trans[i]) - 1])
      n.transitions.push_back(m.transitions[i]);
  return n;
}

std::optional<SubStructure> repair(const KripkeStructure& m, const CtlPtr& f,
                                   const RepairOptions& opts) {
  for (const auto& p : propositions_of(f))
    if (!m.ap_index(p)) throw std::invalid_argument("unknown proposition: " + p);

  RepairEncoding enc = encode_repair(m, to_pnf(f), opts.require_initial);
  if (opts.emit_cnf_path) {
    std::ofstream out(*opts.emit_cnf_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + *opts.emit_cnf_path);
    out << enc.cnf.to_dimacs();
  }

  const SolverFn solve = opts.solver ? opts.solver : SolverFn(&sat_solve);
  auto model = solve(enc.cnf);
  if (!model) return std::nullopt;
  SubStructure best = decode_model(m, enc, *model);

  if (opts.maximize_retained) {
    while (best.transitions.size() < m.transitions.size()) {
      CnfInstance harder = enc.cnf;
      add_at_least_k(harder, enc.keep_trans,
                     static_cast<int>(best.transitions.size()) + 1);
      auto better = solve(harder);
      if (!better) break;
      best = decode_model(m, enc, *better);  // keep vars hold their indices
    }
  }

  if (!models(best, f)) throw std::logic_error("repair result failed re-verification");
  return best;
}

std::optional<SubStructure> brute_force_repair(const KripkeStructure& m, const CtlPtr& f,
                                               std::size_t max_transitions) {
  for (const auto& p : propositions_of(f))
    if (!m.ap_index(p)) throw std::invalid_argument("unknown proposition: " + p);

  std::optional<SubStructure> best;
  for (auto& n : enumerate_substructures(m, max_transitions)) {
    if (n.empty() || n.derived_initial().empty()) continue;
    if (!models(n, f)) continue;
    if (!best || n.transitions.size() > best->transitions.size()) best = std::move(n);
  }
  return best;
}

std::optional<QuotientRepair> repair_via_quotient(const KripkeStructure& m,
                                                  const SymmetryGroup& g,
                                                  const RepresentativeMap& theta,
                                                  const CtlPtr& f,
                                                  const RepairOptions& opts) {
  if (!is_g_invariant(m, g, f))
    throw std::invalid_argument("formula is not invariant under the symmetry group");

  auto q = std::make_shared<QuotientResult>(quotient(m, g, theta));
  auto qrep = repair(q->quotient, f, opts);
  if (!qrep) return std::nullopt;

  QuotientRepair out;
  out.q = q;  // keeps the quotient structure alive for both substructures
  // orphaned kept states would lift to orphaned orbits; drop them before
  // lifting so the lift is the maximal preimage of actual behavior
  out.quotient_repair = reachable_part(*qrep);
  out.lifted = lift_maximal(out.quotient_repair, *q);
  if (!models(out.lifted, f)) throw std::logic_error("lifted repair failed re-verification");
  return out;
}

}  // namespace symrep
