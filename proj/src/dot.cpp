#include "symrep/dot.hpp"

namespace symrep {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const KripkeStructure& m, const DotOptions& opts) {
  std::string out = "digraph kripke {\n  rankdir=LR;\n  node [shape=circle];\n";

  for (StateId s = 0; s < m.num_states(); ++s) {
    std::string label = m.names[s];
    if (opts.show_labels && !m.ap.empty()) {
      std::string props;
      for (std::size_t p = 0; p < m.ap.size(); ++p)
        if (m.labels[s][p]) props += (props.empty() ? "" : ",") + m.ap[p];
      label += "\\n{" + props + "}";
    }
    std::string attrs = "label=\"" + escape(label) + "\"";
    if (m.is_initial(s)) attrs += ", shape=doublecircle";
    if (opts.overlay && !opts.overlay->contains_state(s)) attrs += ", style=dashed";
    out += "  \"" + escape(m.names[s]) + "\" [" + attrs + "];\n";
  }

  for (const auto& t : m.transitions) {
    std::string attrs;
    if (opts.overlay && !opts.overlay->contains_transition(t.first, t.second))
      attrs = "style=dashed";
    if (opts.edge_labels) {
      const auto at = opts.edge_labels->find(t);
      if (at != opts.edge_labels->end() && !at->second.empty()) {
        std::string procs;
        std::uint32_t last = ~0u;
        for (const auto& l : at->second) {
          if (l.process == last) continue;  // labels sorted by process first
          procs += (procs.empty() ? "" : ",") + std::to_string(l.process + 1);
          last = l.process;
        }
        const auto color = kPalette[at->second.front().process %
                                    (sizeof(kPalette) / sizeof(kPalette[0]))];
        if (!attrs.empty()) attrs += ", ";
        attrs += "color=\"" + std::string(color) + "\", label=\"" + procs + "\"";
      }
    }
    out += "  \"" + escape(m.names[t.first]) + "\" -> \"" + escape(m.names[t.second]) + "\"";
    if (!attrs.empty()) out += " [" + attrs + "]";
    out += ";\n";
  }
  out += "}\n";
  return out;
}

std::string to_dot(const SubStructure& n) {
  DotOptions opts;
  opts.overlay = &n;
  return to_dot(*n.parent, opts);
}

}  // namespace symrep
