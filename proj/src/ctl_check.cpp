#include <algorithm>
#include <map>
#include <stdexcept>

#include "symrep/ctl.hpp"

namespace symrep {

KripkeView view_of(const KripkeStructure& m) {
  KripkeView v;
  v.base = &m;
  v.states.resize(m.num_states());
  for (StateId s = 0; s < m.num_states(); ++s) v.states[s] = s;
  v.initial = m.initial;
  v.index_of.assign(m.num_states(), -1);
  for (std::uint32_t i = 0; i < v.states.size(); ++i) v.index_of[v.states[i]] = i;
  v.succ.resize(v.states.size());
  for (std::uint32_t i = 0; i < v.states.size(); ++i)
    for (StateId t : m.succ[v.states[i]]) v.succ[i].push_back(v.index_of[t]);
  return v;
}

KripkeView view_of(const SubStructure& n) {
  KripkeView v;
  v.base = n.parent;
  v.states = n.states;
  v.initial = n.derived_initial();
  v.index_of.assign(n.parent->num_states(), -1);
  for (std::uint32_t i = 0; i < v.states.size(); ++i) v.index_of[v.states[i]] = i;
  v.succ.resize(v.states.size());
  for (const auto& [a, b] : n.transitions) v.succ[v.index_of[a]].push_back(v.index_of[b]);
  return v;
}

bool SatSet::holds_at(StateId base_id) const {
  auto it = std::lower_bound(states.begin(), states.end(), base_id);
  if (it == states.end() || *it != base_id)
    throw std::invalid_argument("state not covered by this satisfaction set");
  return holds[static_cast<std::size_t>(it - states.begin())];
}

namespace {

struct Checker {
  const KripkeView& v;
  std::vector<std::vector<std::uint32_t>> pred;
  std::map<std::string, std::vector<bool>> memo;

  explicit Checker(const KripkeView& view) : v(view) {
    pred.resize(v.size());
    for (std::uint32_t s = 0; s < v.size(); ++s)
      for (std::uint32_t t : v.succ[s]) pred[t].push_back(s);
  }

  const std::vector<bool>& eval(const CtlPtr& f) {
    auto key = ctl_key(f);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<bool> r;
    switch (f->kind) {
      case CtlKind::True:
        r.assign(v.size(), true);
        break;
      case CtlKind::False:
        r.assign(v.size(), false);
        break;
      case CtlKind::Prop: {
        auto pi = v.base->ap_index(f->prop);
        if (!pi) throw std::invalid_argument("unknown proposition: " + f->prop);
        r.resize(v.size());
        for (std::uint32_t s = 0; s < v.size(); ++s) r[s] = v.label(s, *pi);
        break;
      }
      case CtlKind::Not: {
        auto a = eval(f->lhs);
        r.resize(v.size());
        for (std::uint32_t s = 0; s < v.size(); ++s) r[s] = !a[s];
        break;
      }
      case CtlKind::And: {
        auto a = eval(f->lhs);
        const auto& b = eval(f->rhs);
        r.resize(v.size());
        for (std::uint32_t s = 0; s < v.size(); ++s) r[s] = a[s] && b[s];
        break;
      }
      case CtlKind::Or: {
        auto a = eval(f->lhs);
        const auto& b = eval(f->rhs);
        r.resize(v.size());
        for (std::uint32_t s = 0; s < v.size(); ++s) r[s] = a[s] || b[s];
        break;
      }
      case CtlKind::AX: {
        const auto& a = eval(f->lhs);
        r.resize(v.size());
        for (std::uint32_t s = 0; s < v.size(); ++s)
          r[s] = std::all_of(v.succ[s].begin(), v.succ[s].end(),
                             [&](std::uint32_t t) { return a[t]; });
        break;
      }
      case CtlKind::EX: {
        const auto& a = eval(f->lhs);
        r.resize(v.size());
        for (std::uint32_t s = 0; s < v.size(); ++s)
          r[s] = std::any_of(v.succ[s].begin(), v.succ[s].end(),
                             [&](std::uint32_t t) { return a[t]; });
        break;
      }
      case CtlKind::AR:
        r = release(eval(f->lhs), eval(f->rhs), /*universal=*/true);
        break;
      case CtlKind::ER:
        r = release(eval(f->lhs), eval(f->rhs), /*universal=*/false);
        break;
      case CtlKind::AU:
        r = until(eval(f->lhs), eval(f->rhs), /*universal=*/true);
        break;
      case CtlKind::EU:
        r = until(eval(f->lhs), eval(f->rhs), /*universal=*/false);
        break;
    }
    return memo.emplace(std::move(key), std::move(r)).first->second;
  }

  // nu Z. psi & (phi | (AX|EX) Z), computed by cascading removal from the
  // psi set; processing order is sorted state index.
  std::vector<bool> release(std::vector<bool> phi, std::vector<bool> psi, bool universal) {
    std::vector<bool> in = psi;
    std::vector<std::size_t> succ_in(v.size(), 0);
    for (std::uint32_t s = 0; s < v.size(); ++s)
      for (std::uint32_t t : v.succ[s])
        if (in[t]) ++succ_in[s];

    auto stays = [&](std::uint32_t s) {
      if (!in[s]) return true;  // already out
      if (phi[s]) return true;
      return universal ? succ_in[s] == v.succ[s].size() : succ_in[s] > 0;
    };

    std::vector<std::uint32_t> work;
    for (std::uint32_t s = 0; s < v.size(); ++s)
      if (in[s] && !stays(s)) work.push_back(s);
    while (!work.empty()) {
      std::sort(work.begin(), work.end());
      work.erase(std::unique(work.begin(), work.end()), work.end());
      std::vector<std::uint32_t> next;
      for (std::uint32_t s : work) {
        if (!in[s] || stays(s)) continue;
        in[s] = false;
        for (std::uint32_t p : pred[s]) {
          --succ_in[p];
          if (in[p] && !stays(p)) next.push_back(p);
        }
      }
      work = std::move(next);
    }
    return in;
  }

  // mu Z. psi | (phi & (AX|EX) Z & has-successor), computed by backward
  // propagation from the psi set.
  std::vector<bool> until(std::vector<bool> phi, std::vector<bool> psi, bool universal) {
    std::vector<bool> in(v.size(), false);
    std::vector<std::size_t> succ_out(v.size());
    for (std::uint32_t s = 0; s < v.size(); ++s) succ_out[s] = v.succ[s].size();

    std::vector<std::uint32_t> queue;
    for (std::uint32_t s = 0; s < v.size(); ++s)
      if (psi[s]) {
        in[s] = true;
        queue.push_back(s);
      }
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::uint32_t t = queue[qi];
      for (std::uint32_t p : pred[t]) {
        if (in[p]) {
          --succ_out[p];
          continue;
        }
        --succ_out[p];
        bool ready = universal ? succ_out[p] == 0 && !v.succ[p].empty() : true;
        if (ready && phi[p]) {
          in[p] = true;
          queue.push_back(p);
        }
      }
    }
    return in;
  }
};

}  // namespace

SatSet check(const KripkeView& v, const CtlPtr& f) {
  if (v.size() == 0) throw std::invalid_argument("check: empty structure");
  Checker c(v);
  SatSet out;
  out.formula = f;
  out.states = v.states;
  out.holds = c.eval(f);
  return out;
}

SatSet check(const KripkeStructure& m, const CtlPtr& f) { return check(view_of(m), f); }
SatSet check(const SubStructure& n, const CtlPtr& f) { return check(view_of(n), f); }

bool models(const KripkeView& v, const CtlPtr& f, bool* vacuous) {
  if (vacuous) *vacuous = v.initial.empty();
  if (v.initial.empty()) return true;
  auto sat = check(v, f);
  return std::all_of(v.initial.begin(), v.initial.end(),
                     [&](StateId s) { return sat.holds_at(s); });
}

bool models(const KripkeStructure& m, const CtlPtr& f, bool* vacuous) {
  return models(view_of(m), f, vacuous);
}
bool models(const SubStructure& n, const CtlPtr& f, bool* vacuous) {
  return models(view_of(n), f, vacuous);
}

}  // namespace symrep
