#include "symrep/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace symrep {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

KripkeStructure parse_structure(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("structure file is not valid JSON: ") + e.what());
  }
  for (const char* key : {"states", "initial", "ap", "labels", "transitions"})
    if (!j.contains(key)) throw std::runtime_error(std::string("structure file missing key: ") + key);

  std::vector<std::string> names = j["states"].get<std::vector<std::string>>();
  std::vector<std::string> initial = j["initial"].get<std::vector<std::string>>();
  std::vector<std::string> ap = j["ap"].get<std::vector<std::string>>();
  std::vector<std::pair<std::string, std::vector<std::string>>> labels;
  for (const auto& [name, props] : j["labels"].items())
    labels.emplace_back(name, props.get<std::vector<std::string>>());
  std::vector<std::pair<std::string, std::string>> transitions;
  for (const auto& t : j["transitions"]) {
    if (!t.is_array() || t.size() != 2)
      throw std::runtime_error("transition entries must be [from, to] pairs");
    transitions.emplace_back(t[0].get<std::string>(), t[1].get<std::string>());
  }
  if (labels.size() != names.size())
    throw std::runtime_error("labels must be given for exactly the declared states");
  return make_structure(std::move(names), initial, std::move(ap), labels, transitions);
}

KripkeStructure load_structure(const std::string& path) {
  return parse_structure(read_file(path));
}

std::string serialize_structure(const KripkeStructure& m) {
  ordered_json j;
  j["states"] = m.names;
  {
    std::vector<std::string> init;
    for (StateId s : m.initial) init.push_back(m.names[s]);
    j["initial"] = init;
  }
  j["ap"] = m.ap;
  ordered_json labels = ordered_json::object();
  for (StateId s = 0; s < m.num_states(); ++s) {
    std::vector<std::string> props;
    for (std::size_t p = 0; p < m.ap.size(); ++p)
      if (m.labels[s][p]) props.push_back(m.ap[p]);
    labels[m.names[s]] = props;
  }
  j["labels"] = labels;
  ordered_json trans = ordered_json::array();
  for (const auto& [a, b] : m.transitions) trans.push_back({m.names[a], m.names[b]});
  j["transitions"] = trans;
  return j.dump(2) + "\n";
}

KripkeStructure substructure_as_structure(const SubStructure& n) {
  const KripkeStructure& p = *n.parent;
  // restrict to states reachable from the derived initial set
  std::vector<bool> keep(p.num_states(), false);
  std::vector<StateId> stack = n.derived_initial();
  for (StateId s : stack) keep[s] = true;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const auto& [a, b] : n.transitions)
      if (a == s && !keep[b]) {
        keep[b] = true;
        stack.push_back(b);
      }
  }
  KripkeStructure out;
  std::vector<std::int32_t> remap(p.num_states(), -1);
  for (StateId s : n.states)
    if (keep[s]) {
      remap[s] = static_cast<std::int32_t>(out.names.size());
      out.names.push_back(p.names[s]);
      out.labels.push_back(p.labels[s]);
    }
  out.ap = p.ap;
  for (StateId s : n.derived_initial())
    out.initial.push_back(static_cast<StateId>(remap[s]));
  for (const auto& [a, b] : n.transitions)
    if (remap[a] >= 0 && remap[b] >= 0)
      out.transitions.emplace_back(static_cast<StateId>(remap[a]), static_cast<StateId>(remap[b]));
  out.finalize();
  return out;
}

std::vector<StateMapping> parse_group_generators(const std::string& json_text,
                                                 const KripkeStructure& m) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("group file is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw std::runtime_error("group file must be an array of generators");
  std::vector<StateMapping> gens;
  for (const auto& entry : j) {
    if (!entry.is_object())
      throw std::runtime_error("each generator must map state names to state names");
    StateMapping g = identity_mapping(m.num_states());
    for (const auto& [from, to] : entry.items()) {
      auto a = m.state_by_name(from);
      auto b = m.state_by_name(to.get<std::string>());
      if (!a || !b)
        throw std::runtime_error("generator mentions unknown state: " + from + " -> " +
                                 to.get<std::string>());
      g.map[*a] = *b;
    }
    gens.push_back(std::move(g));
  }
  return gens;
}

std::vector<StateMapping> load_group_generators(const std::string& path,
                                                const KripkeStructure& m) {
  return parse_group_generators(read_file(path), m);
}

std::string serialize_group_generators(const std::vector<StateMapping>& gens,
                                       const KripkeStructure& m) {
  ordered_json j = ordered_json::array();
  for (const auto& g : gens) {
    ordered_json o = ordered_json::object();
    for (StateId s = 0; s < m.num_states(); ++s)
      if (g(s) != s) o[m.names[s]] = m.names[g(s)];
    j.push_back(o);
  }
  return j.dump(2) + "\n";
}

std::string serialize_theta(const QuotientResult& q) {
  ordered_json j = ordered_json::object();
  for (StateId s = 0; s < q.source->num_states(); ++s)
    j[q.source->names[s]] = q.source->names[q.theta(s)];
  return j.dump(2) + "\n";
}

std::string serialize_satset(const SatSet& s, const KripkeStructure& m) {
  ordered_json j = ordered_json::object();
  j["formula"] = to_string(s.formula);
  ordered_json h = ordered_json::object();
  for (std::size_t i = 0; i < s.states.size(); ++i) h[m.names[s.states[i]]] = (bool)s.holds[i];
  j["holds"] = h;
  return j.dump(2) + "\n";
}

}  // namespace symrep
