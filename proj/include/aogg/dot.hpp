#pragma once

// Graphviz DOT export. Output depends only on the input, never on addresses
// or clocks.

#include "aogg/cpa.hpp"

namespace aogg {

namespace detail {

inline std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

inline std::string node_caption(const Node& n) {
  std::string out = n.label.empty() ? "" : n.label + ": ";
  out += n.type;
  for (const auto& [a, t] : n.attrs) out += "\n" + a + " = " + to_string(t);
  return out;
}

inline void dot_graph_body(std::ostream& os, const TypedGraph& g, const std::string& prefix, const std::string& indent,
                           const std::map<NodeId, std::string>* captions = nullptr) {
  for (const auto& [id, n] : g.nodes()) {
    std::string caption = node_caption(n);
    if (captions)
      if (auto it = captions->find(id); it != captions->end()) caption = it->second;
    os << indent << prefix << id.value << " [label=\"" << dot_escape(caption) << "\"];\n";
  }
  for (const auto& [id, e] : g.edges())
    os << indent << prefix << e.source.value << " -> " << prefix << e.target.value << " [label=\""
       << dot_escape(e.type) << "\"];\n";
}

}  // namespace detail

inline std::string export_dot(const TypedGraph& g, const std::string& name = "G") {
  std::ostringstream os;
  os << "digraph \"" << detail::dot_escape(name) << "\" {\n";
  detail::dot_graph_body(os, g, "n", "  ");
  os << "}\n";
  return os.str();
}

/// L, K and R as clusters, with dashed span edges from K.
inline std::string export_dot(const Rule& r) {
  std::ostringstream os;
  os << "digraph \"" << detail::dot_escape(r.name) << "\" {\n  compound=true;\n";
  const std::array<std::pair<const char*, const TypedGraph*>, 3> parts{
      {{"L", &r.left}, {"K", &r.interface}, {"R", &r.right}}};
  for (const auto& [tag, g] : parts) {
    os << "  subgraph cluster_" << tag << " {\n    label=\"" << tag << "\";\n";
    detail::dot_graph_body(os, *g, tag, "    ");
    os << "  }\n";
  }
  for (const auto& [k, l] : r.l.nodes) os << "  K" << k.value << " -> L" << l.value << " [style=dashed];\n";
  for (const auto& [k, x] : r.r.nodes) os << "  K" << k.value << " -> R" << x.value << " [style=dashed];\n";
  os << "}\n";
  return os.str();
}

inline std::string_view role_name(Role r) {
  switch (r) {
    case Role::Node: return "node";
    case Role::EdgeNode: return "edge";
    case Role::Source: return "src";
    case Role::Target: return "tgt";
    case Role::SpanLeft: return "l";
    case Role::SpanRight: return "r";
    case Role::Identity: return "identity";
    case Role::IdentityLink: return "id";
  }
  return "";
}

/// Encoded grammar with encoded elements captioned by their origin.
inline std::string export_dot(const EncodedGrammar& eg, const std::string& name = "encoded") {
  std::map<NodeId, std::string> captions;
  for (const auto& [rule, tr] : eg.traces)
    for (const auto& [id, p] : tr.node_origin) {
      std::string c = rule + " " + std::string(role_name(p.key.role));
      if (p.key.role != Role::Identity)
        c += " " + std::string(slot_prefix(p.key.slot)) + "#" + std::to_string(p.key.original);
      captions[id] = c + "\n" + eg.graph.node(id).type;
    }
  std::ostringstream os;
  os << "digraph \"" << detail::dot_escape(name) << "\" {\n";
  detail::dot_graph_body(os, eg.graph, "n", "  ", &captions);
  os << "}\n";
  return os.str();
}

/// Rules as nodes, one edge per nonzero cell labelled with its count.
inline std::string export_dot(const CpaMatrix& m, const std::string& name = "cpa") {
  std::ostringstream os;
  os << "digraph \"" << detail::dot_escape(name) << "\" {\n";
  for (std::size_t i = 0; i < m.rules.size(); ++i)
    os << "  r" << i << " [label=\"" << detail::dot_escape(m.rules[i]) << "\"];\n";
  for (std::size_t i = 0; i < m.rules.size(); ++i)
    for (std::size_t j = 0; j < m.rules.size(); ++j)
      if (std::size_t c = m.count(m.rules[i], m.rules[j]))
        os << "  r" << i << " -> r" << j << " [label=\"" << c << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace aogg
