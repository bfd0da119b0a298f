#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "symrep/kripke.hpp"

namespace symrep {

// Core grammar keeps AR/ER as the primitive path operators; the parser
// rewrites U/F/G sugar into them. AU/EU node kinds exist so that positive
// normal form (see repair) stays negation-free; the checker evaluates them
// as the dual least fixpoints.
enum class CtlKind { True, False, Prop, Not, And, Or, AX, EX, AR, ER, AU, EU };

struct CtlFormula;
using CtlPtr = std::shared_ptr<const CtlFormula>;

struct CtlFormula {
  CtlKind kind;
  std::string prop;  // Prop only
  CtlPtr lhs, rhs;   // unary ops use lhs
};

namespace ctl {
CtlPtr t();
CtlPtr f();
CtlPtr prop(std::string name);
CtlPtr not_(CtlPtr a);
CtlPtr and_(CtlPtr a, CtlPtr b);
CtlPtr or_(CtlPtr a, CtlPtr b);
CtlPtr ax(CtlPtr a);
CtlPtr ex(CtlPtr a);
CtlPtr ar(CtlPtr a, CtlPtr b);
CtlPtr er(CtlPtr a, CtlPtr b);
CtlPtr au(CtlPtr a, CtlPtr b);
CtlPtr eu(CtlPtr a, CtlPtr b);
}  // namespace ctl

bool ctl_equal(const CtlPtr& a, const CtlPtr& b);
std::string to_string(const CtlPtr& f);
// structural key usable for dedup maps
std::string ctl_key(const CtlPtr& f);
std::vector<std::string> propositions_of(const CtlPtr& f);
bool is_propositional(const CtlPtr& f);
// Subformulas with no path operator inside, whose parent (if any) has one.
std::vector<CtlPtr> max_prop_subformulae(const CtlPtr& f);

struct CtlParseError : std::runtime_error {
  std::size_t position;
  CtlParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg), position(pos) {}
};

// Concrete syntax: ! & | AX EX A[_ R _] E[_ R _] with U/F/G sugar; propositions
// [a-zA-Z_][a-zA-Z0-9_]* excluding keywords; precedence ! > & > |.
CtlPtr parse_formula(const std::string& text);

// Uniform read-only view used by the checker: a whole structure or a
// substructure with derived initial states and labels. Successor lists never
// leave the viewed state set.
struct KripkeView {
  const KripkeStructure* base = nullptr;
  std::vector<StateId> states;                // sorted base ids
  std::vector<StateId> initial;               // subset of states
  std::vector<std::vector<std::uint32_t>> succ;  // view-local indices
  std::vector<std::int32_t> index_of;         // base id -> view index or -1

  [[nodiscard]] std::size_t size() const { return states.size(); }
  [[nodiscard]] bool label(std::uint32_t view_idx, std::size_t ap_idx) const {
    return base->labels[states[view_idx]][ap_idx];
  }
};

KripkeView view_of(const KripkeStructure& m);
KripkeView view_of(const SubStructure& n);

struct SatSet {
  CtlPtr formula;
  std::vector<StateId> states;  // base ids, sorted (the checked states)
  std::vector<bool> holds;

  [[nodiscard]] bool holds_at(StateId base_id) const;
};

// Explicit-state evaluation; greatest fixpoints for AR/ER, least for AU/EU.
// Throws std::invalid_argument on empty view or unknown proposition.
SatSet check(const KripkeView& v, const CtlPtr& f);
SatSet check(const KripkeStructure& m, const CtlPtr& f);
SatSet check(const SubStructure& n, const CtlPtr& f);

// Conjunction over the (derived) initial states; vacuously true when there
// are none, reported through *vacuous when provided.
bool models(const KripkeView& v, const CtlPtr& f, bool* vacuous = nullptr);
bool models(const KripkeStructure& m, const CtlPtr& f, bool* vacuous = nullptr);
bool models(const SubStructure& n, const CtlPtr& f, bool* vacuous = nullptr);

}  // namespace symrep
