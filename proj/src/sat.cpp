#include "symrep/sat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace symrep {

std::string CnfInstance::to_dimacs() const {
  std::ostringstream out;
  for (int v = 1; v <= num_vars; ++v) out << "c var " << v << " " << var_names[v - 1] << "\n";
  out << "p cnf " << num_vars << " " << clauses.size() << "\n";
  for (const auto& c : clauses) {
    for (int l : c) out << l << " ";
    out << "0\n";
  }
  return out.str();
}

namespace {

struct Dpll {
  int nvars;
  std::vector<std::vector<int>> cls;
  std::vector<std::vector<int>> watch;  // literal slot -> clause ids
  std::vector<signed char> val;         // var -> -1 unknown / 0 false / 1 true
  std::vector<int> trail;
  std::size_t qhead = 0;
  std::vector<std::size_t> dec_pos;  // trail index of each decision
  std::vector<signed char> dec_flipped;

  static std::size_t slot(int lit) {
    return 2 * static_cast<std::size_t>(std::abs(lit) - 1) + (lit < 0 ? 1 : 0);
  }

  signed char lit_val(int lit) const {
    signed char v = val[std::abs(lit)];
    if (v < 0) return -1;
    return lit > 0 ? v : static_cast<signed char>(1 - v);
  }

  bool enqueue(int lit) {
    signed char lv = lit_val(lit);
    if (lv == 0) return false;
    if (lv == 1) return true;
    val[std::abs(lit)] = lit > 0 ? 1 : 0;
    trail.push_back(lit);
    return true;
  }

  bool propagate() {
    while (qhead < trail.size()) {
      int fl = -trail[qhead++];  // literal that just became false
      auto& wl = watch[slot(fl)];
      std::vector<int> keep;
      keep.reserve(wl.size());
      for (std::size_t wi = 0; wi < wl.size(); ++wi) {
        int ci = wl[wi];
        auto& c = cls[ci];
        if (c[0] == fl) std::swap(c[0], c[1]);
        if (lit_val(c[0]) == 1) {
          keep.push_back(ci);
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k)
          if (lit_val(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watch[slot(c[1])].push_back(ci);
            moved = true;
            break;
          }
        if (moved) continue;
        keep.push_back(ci);
        if (!enqueue(c[0])) {
          for (std::size_t k = wi + 1; k < wl.size(); ++k) keep.push_back(wl[k]);
          wl = std::move(keep);
          return false;
        }
      }
      wl = std::move(keep);
    }
    return true;
  }

  bool backtrack() {
    while (!dec_pos.empty()) {
      std::size_t dp = dec_pos.back();
      int declit = trail[dp];
      bool was_flipped = dec_flipped.back();
      for (std::size_t i = trail.size(); i > dp; --i) val[std::abs(trail[i - 1])] = -1;
      trail.resize(dp);
      qhead = dp;
      dec_pos.pop_back();
      dec_flipped.pop_back();
      if (!was_flipped) {
        dec_pos.push_back(trail.size());
        dec_flipped.push_back(1);
        enqueue(-declit);
        return true;
      }
    }
    return false;
  }

  std::optional<std::vector<bool>> run() {
    if (!propagate()) return std::nullopt;
    for (;;) {
      int v = 0;
      for (int i = 1; i <= nvars; ++i)
        if (val[i] < 0) {
          v = i;
          break;
        }
      if (v == 0) {
        std::vector<bool> model(nvars);
        for (int i = 1; i <= nvars; ++i) model[i - 1] = val[i] == 1;
        return model;
      }
      dec_pos.push_back(trail.size());
      dec_flipped.push_back(0);
      enqueue(v);
      while (!propagate())
        if (!backtrack()) return std::nullopt;
    }
  }
};

}  // namespace

std::optional<std::vector<bool>> sat_solve(const CnfInstance& inst) {
  Dpll s;
  s.nvars = inst.num_vars;
  s.val.assign(inst.num_vars + 1, -1);
  s.watch.assign(2 * static_cast<std::size_t>(inst.num_vars), {});

  std::vector<int> units;
  for (const auto& raw : inst.clauses) {
    std::vector<int> c = raw;
    std::sort(c.begin(), c.end(), [](int a, int b) {
      return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
    });
    c.erase(std::unique(c.begin(), c.end()), c.end());
    bool taut = false;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (c[i] == -c[i + 1]) taut = true;
    if (taut) continue;
    if (c.empty()) return std::nullopt;
    if (c.size() == 1) {
      units.push_back(c[0]);
      continue;
    }
    int ci = static_cast<int>(s.cls.size());
    s.cls.push_back(c);
    s.watch[Dpll::slot(c[0])].push_back(ci);
    s.watch[Dpll::slot(c[1])].push_back(ci);
  }
  for (int u : units)
    if (!s.enqueue(u)) return std::nullopt;

  auto model = s.run();
  if (model) {
    // cheap soundness audit of the returned assignment
    for (const auto& c : inst.clauses) {
      bool sat = false;
      for (int l : c)
        if ((l > 0) == (*model)[std::abs(l) - 1]) {
          sat = true;
          break;
        }
      if (!sat) throw std::logic_error("sat_solve produced a non-model");
    }
  }
  return model;
}

void add_at_most_k(CnfInstance& inst, const std::vector<int>& lits, int k) {
  const int n = static_cast<int>(lits.size());
  if (k >= n) return;
  if (k <= 0) {
    for (int l : lits) inst.add_clause({-l});
    return;
  }
  // Sinz sequential counter: r[i][j] = "at least j of the first i+1 are true"
  std::vector<std::vector<int>> r(n - 1, std::vector<int>(k));
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < k; ++j)
      r[i][j] = inst.new_var("card r " + std::to_string(i) + " " + std::to_string(j));
  inst.add_clause({-lits[0], r[0][0]});
  for (int j = 1; j < k; ++j) inst.add_clause({-r[0][j]});
  for (int i = 1; i < n - 1; ++i) {
    inst.add_clause({-lits[i], r[i][0]});
    inst.add_clause({-r[i - 1][0], r[i][0]});
    for (int j = 1; j < k; ++j) {
      inst.add_clause({-lits[i], -r[i - 1][j - 1], r[i][j]});
      inst.add_clause({-r[i - 1][j], r[i][j]});
    }
    inst.add_clause({-lits[i], -r[i - 1][k - 1]});
  }
  inst.add_clause({-lits[n - 1], -r[n - 2][k - 1]});
}

void add_at_least_k(CnfInstance& inst, const std::vector<int>& lits, int k) {
  if (k <= 0) return;
  const int n = static_cast<int>(lits.size());
  if (k > n) {
    inst.add_clause({});
    return;
  }
  if (k == 1) {
    inst.add_clause(lits);
    return;
  }
  std::vector<int> neg;
  neg.reserve(lits.size());
  for (int l : lits) neg.push_back(-l);
  add_at_most_k(inst, neg, n - k);
}

std::optional<std::vector<bool>> parse_solver_output(const std::string& text, int num_vars) {
  std::istringstream in(text);
  std::string line;
  bool sat = false, status_seen = false;
  std::vector<bool> model(num_vars, false);
  while (std::getline(in, line)) {
    if (line.rfind("s ", 0) == 0) {
      status_seen = true;
      if (line.find("UNSATISFIABLE") != std::string::npos)
        return std::nullopt;
      if (line.find("SATISFIABLE") != std::string::npos)
        sat = true;
      else
        throw std::runtime_error("external solver: unknown status line: " + line);
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream vs(line.substr(2));
      long lit;
      while (vs >> lit) {
        if (lit == 0) continue;
        long v = std::labs(lit);
        if (v >= 1 && v <= num_vars) model[v - 1] = lit > 0;
      }
    }
  }
  if (!status_seen) throw std::runtime_error("external solver produced no status line");
  if (!sat) throw std::runtime_error("external solver status line malformed");
  return model;
}

}  // namespace symrep
