#include "symrep/ctl.hpp"

#include <algorithm>

namespace symrep {

namespace ctl {

static CtlPtr node(CtlKind k, std::string p, CtlPtr l, CtlPtr r) {
  auto n = std::make_shared<CtlFormula>();
  n->kind = k;
  n->prop = std::move(p);
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

CtlPtr t() { return node(CtlKind::True, {}, nullptr, nullptr); }
CtlPtr f() { return node(CtlKind::False, {}, nullptr, nullptr); }
CtlPtr prop(std::string name) { return node(CtlKind::Prop, std::move(name), nullptr, nullptr); }
CtlPtr not_(CtlPtr a) { return node(CtlKind::Not, {}, std::move(a), nullptr); }
CtlPtr and_(CtlPtr a, CtlPtr b) { return node(CtlKind::And, {}, std::move(a), std::move(b)); }
CtlPtr or_(CtlPtr a, CtlPtr b) { return node(CtlKind::Or, {}, std::move(a), std::move(b)); }
CtlPtr ax(CtlPtr a) { return node(CtlKind::AX, {}, std::move(a), nullptr); }
CtlPtr ex(CtlPtr a) { return node(CtlKind::EX, {}, std::move(a), nullptr); }
CtlPtr ar(CtlPtr a, CtlPtr b) { return node(CtlKind::AR, {}, std::move(a), std::move(b)); }
CtlPtr er(CtlPtr a, CtlPtr b) { return node(CtlKind::ER, {}, std::move(a), std::move(b)); }
CtlPtr au(CtlPtr a, CtlPtr b) { return node(CtlKind::AU, {}, std::move(a), std::move(b)); }
CtlPtr eu(CtlPtr a, CtlPtr b) { return node(CtlKind::EU, {}, std::move(a), std::move(b)); }

}  // namespace ctl

bool ctl_equal(const CtlPtr& a, const CtlPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->prop != b->prop) return false;
  return ctl_equal(a->lhs, b->lhs) && ctl_equal(a->rhs, b->rhs);
}

std::string to_string(const CtlPtr& f) {
  // parenthesization follows precedence ! > & > |
  auto needs_paren = [](const CtlPtr& child, int parent_level) {
    int lvl;
    switch (child->kind) {
      case CtlKind::Or: lvl = 0; break;
      case CtlKind::And: lvl = 1; break;
      default: lvl = 2; break;
    }
    return lvl < parent_level;
  };
  auto wrap = [&](const CtlPtr& child, int parent_level) {
    std::string s = to_string(child);
    if (needs_paren(child, parent_level)) return "(" + s + ")";
    return s;
  };
  switch (f->kind) {
    case CtlKind::True: return "true";
    case CtlKind::False: return "false";
    case CtlKind::Prop: return f->prop;
    case CtlKind::Not: return "!" + wrap(f->lhs, 2);
    case CtlKind::And: return wrap(f->lhs, 1) + " & " + wrap(f->rhs, 1);
    case CtlKind::Or: return wrap(f->lhs, 0) + " | " + wrap(f->rhs, 0);
    case CtlKind::AX: return "AX " + wrap(f->lhs, 2);
    case CtlKind::EX: return "EX " + wrap(f->lhs, 2);
    case CtlKind::AR: return "A[" + to_string(f->lhs) + " R " + to_string(f->rhs) + "]";
    case CtlKind::ER: return "E[" + to_string(f->lhs) + " R " + to_string(f->rhs) + "]";
    case CtlKind::AU: return "A[" + to_string(f->lhs) + " U " + to_string(f->rhs) + "]";
    case CtlKind::EU: return "E[" + to_string(f->lhs) + " U " + to_string(f->rhs) + "]";
  }
  return "?";
}

std::string ctl_key(const CtlPtr& f) { return to_string(f); }

static void collect_props(const CtlPtr& f, std::vector<std::string>& out) {
  if (!f) return;
  if (f->kind == CtlKind::Prop) out.push_back(f->prop);
  collect_props(f->lhs, out);
  collect_props(f->rhs, out);
}

std::vector<std::string> propositions_of(const CtlPtr& f) {
  std::vector<std::string> out;
  collect_props(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_propositional(const CtlPtr& f) {
  switch (f->kind) {
    case CtlKind::True:
    case CtlKind::False:
    case CtlKind::Prop:
      return true;
    case CtlKind::Not:
      return is_propositional(f->lhs);
    case CtlKind::And:
    case CtlKind::Or:
      return is_propositional(f->lhs) && is_propositional(f->rhs);
    default:
      return false;
  }
}

static void collect_max_prop(const CtlPtr& f, std::vector<CtlPtr>& out) {
  if (!f) return;
  if (is_propositional(f)) {
    for (const auto& g : out)
      if (ctl_equal(g, f)) return;
    out.push_back(f);
    return;
  }
  collect_max_prop(f->lhs, out);
  collect_max_prop(f->rhs, out);
}

std::vector<CtlPtr> max_prop_subformulae(const CtlPtr& f) {
  std::vector<CtlPtr> out;
  collect_max_prop(f, out);
  return out;
}

}  // namespace symrep
