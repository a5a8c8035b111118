#pragma once

// Categorical constructions on typed graphs: pushouts, pushout complements,
// disjoint unions and isomorphism.

#include "aogg/search.hpp"

#include <numeric>

namespace aogg {

struct GluingViolation {
  enum class Kind { DanglingEdge, IdentificationClash };
  Kind kind;
  std::vector<std::string> elements;  // offending host elements

  std::string message() const {
    std::string out = kind == Kind::DanglingEdge ? "dangling edge" : "identification clash";
    out += ":";
    for (const auto& e : elements) out += " " + e + ";";
    if (!elements.empty()) out.pop_back();
    return out;
  }
};

inline std::string_view to_string(GluingViolation::Kind k) {
  return k == GluingViolation::Kind::DanglingEdge ? "DanglingEdge" : "IdentificationClash";
}

struct GluingError : std::runtime_error {
  GluingViolation violation;
  explicit GluingError(GluingViolation v)
      : std::runtime_error(v.message()), violation(std::move(v)) {}
};

struct PushoutResult {
  TypedGraph graph;
  GraphMorphism from_left;   // D -> H
  GraphMorphism from_right;  // R -> H
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Pushout of D <-left- K -right-> R. Classes containing an element of D keep
/// the smallest D identifier; classes made only of R elements receive fresh
/// identifiers in ascending R order. Attributes and labels come from D when
/// present.
inline PushoutResult pushout(const TypedGraph& interface, const TypedGraph& left_graph,
                             const TypedGraph& right_graph, const GraphMorphism& left,
                             const GraphMorphism& right) {
  require_same_types(left_graph, right_graph, "pushout");
  // Index D nodes 0..nd-1 then R nodes.
  std::vector<NodeId> d_nodes, r_nodes;
  for (const auto& [id, n] : left_graph.nodes()) d_nodes.push_back(id);
  for (const auto& [id, n] : right_graph.nodes()) r_nodes.push_back(id);
  std::map<NodeId, std::size_t> d_index, r_index;
  for (std::size_t i = 0; i < d_nodes.size(); ++i) d_index[d_nodes[i]] = i;
  for (std::size_t i = 0; i < r_nodes.size(); ++i) r_index[r_nodes[i]] = d_nodes.size() + i;
  detail::UnionFind nodes_uf(d_nodes.size() + r_nodes.size());
  for (const auto& [k, n] : interface.nodes())
    nodes_uf.unite(d_index.at(left.nodes.at(k)), r_index.at(right.nodes.at(k)));

  std::vector<EdgeId> d_edges, r_edges;
  for (const auto& [id, e] : left_graph.edges()) d_edges.push_back(id);
  for (const auto& [id, e] : right_graph.edges()) r_edges.push_back(id);
  std::map<EdgeId, std::size_t> de_index, re_index;
  for (std::size_t i = 0; i < d_edges.size(); ++i) de_index[d_edges[i]] = i;
  for (std::size_t i = 0; i < r_edges.size(); ++i) re_index[r_edges[i]] = d_edges.size() + i;
  detail::UnionFind edges_uf(d_edges.size() + r_edges.size());
  for (const auto& [k, e] : interface.edges())
    edges_uf.unite(de_index.at(left.edges.at(k)), re_index.at(right.edges.at(k)));

  PushoutResult out{TypedGraph(left_graph.types()), {}, {}};
  // Representatives are minimal indices, so D members always represent.
  std::map<std::size_t, NodeId> class_node;
  for (std::size_t i = 0; i < d_nodes.size(); ++i) {
    std::size_t rep = nodes_uf.find(i);
    if (rep == i) {
      const Node& n = left_graph.node(d_nodes[i]);
      out.graph.insert_node(n);
      class_node[rep] = n.id;
    }
  }
  std::uint32_t next = std::max(left_graph.next_node_id(), out.graph.next_node_id());
  for (std::size_t i = 0; i < r_nodes.size(); ++i) {
    std::size_t idx = d_nodes.size() + i;
    std::size_t rep = nodes_uf.find(idx);
    if (rep == idx) {
      Node n = right_graph.node(r_nodes[i]);
      n.id = NodeId(next++);
      out.graph.insert_node(n);
      class_node[rep] = n.id;
    }
  }
  for (std::size_t i = 0; i < d_nodes.size(); ++i)
    out.from_left.nodes[d_nodes[i]] = class_node.at(nodes_uf.find(i));
  for (std::size_t i = 0; i < r_nodes.size(); ++i)
    out.from_right.nodes[r_nodes[i]] = class_node.at(nodes_uf.find(d_nodes.size() + i));

  std::map<std::size_t, EdgeId> class_edge;
  for (std::size_t i = 0; i < d_edges.size(); ++i) {
    if (edges_uf.find(i) != i) continue;
    Edge e = left_graph.edge(d_edges[i]);
    e.source = out.from_left.nodes.at(e.source);
    e.target = out.from_left.nodes.at(e.target);
    out.graph.insert_edge(e);
    class_edge[i] = e.id;
  }
  std::uint32_t next_edge = std::max(left_graph.next_edge_id(), out.graph.next_edge_id());
  for (std::size_t i = 0; i < r_edges.size(); ++i) {
    std::size_t idx = d_edges.size() + i;
    if (edges_uf.find(idx) != idx) continue;
    Edge e = right_graph.edge(r_edges[i]);
    e.id = EdgeId(next_edge++);
    e.source = out.from_right.nodes.at(e.source);
    e.target = out.from_right.nodes.at(e.target);
    out.graph.insert_edge(e);
    class_edge[idx] = e.id;
  }
  for (std::size_t i = 0; i < d_edges.size(); ++i)
    out.from_left.edges[d_edges[i]] = class_edge.at(edges_uf.find(i));
  for (std::size_t i = 0; i < r_edges.size(); ++i)
    out.from_right.edges[r_edges[i]] = class_edge.at(edges_uf.find(d_edges.size() + i));
  return out;
}

struct PushoutComplement {
  TypedGraph graph;              // D
  GraphMorphism from_interface;  // K -> D
  GraphMorphism into_host;       // D -> G (an inclusion; identifiers are kept)
};

using ComplementOutcome = std::variant<PushoutComplement, GluingViolation>;

namespace detail {

/// Elements of `host` removed by deleting m(pattern \ preserved).
struct DeletionSet {
  std::set<NodeId> nodes;
  std::set<EdgeId> edges;
};

inline std::optional<GluingViolation> check_deletion(const TypedGraph& pattern,
                                                     const std::set<NodeId>& kept_nodes,
                                                     const std::set<EdgeId>& kept_edges,
                                                     const GraphMorphism& match,
                                                     const TypedGraph& host, DeletionSet& del) {
  // identification: only preserved elements may be identified
  std::map<NodeId, std::vector<NodeId>> node_pre;
  for (const auto& [a, b] : match.nodes) node_pre[b].push_back(a);
  std::map<EdgeId, std::vector<EdgeId>> edge_pre;
  for (const auto& [a, b] : match.edges) edge_pre[b].push_back(a);
  GluingViolation clash{GluingViolation::Kind::IdentificationClash, {}};
  for (const auto& [b, pre] : node_pre) {
    if (pre.size() < 2) continue;
    for (NodeId a : pre)
      if (!kept_nodes.count(a)) {
        clash.elements.push_back(describe(host, b));
        break;
      }
  }
  for (const auto& [b, pre] : edge_pre) {
    if (pre.size() < 2) continue;
    for (EdgeId a : pre)
      if (!kept_edges.count(a)) {
        clash.elements.push_back(describe(host, b));
        break;
      }
  }
  if (!clash.elements.empty()) return clash;

  for (const auto& [a, n] : pattern.nodes())
    if (!kept_nodes.count(a)) del.nodes.insert(match.nodes.at(a));
  for (const auto& [a, e] : pattern.edges())
    if (!kept_edges.count(a)) del.edges.insert(match.edges.at(a));

  GluingViolation dangling{GluingViolation::Kind::DanglingEdge, {}};
  for (const auto& [id, e] : host.edges()) {
    if (del.edges.count(id)) continue;
    if (del.nodes.count(e.source) || del.nodes.count(e.target))
      dangling.elements.push_back(describe(host, id));
  }
  if (!dangling.elements.empty()) return dangling;
  return std::nullopt;
}

}  // namespace detail

/// Complement of K -l-> L -m-> G: D = G minus m(L \ l(K)). `l` must be
/// injective. Fails with a GluingViolation when the dangling or the
/// identification condition does not hold.
inline ComplementOutcome pushout_complement(const TypedGraph& interface, const TypedGraph& pattern,
                                            const TypedGraph& host, const GraphMorphism& l,
                                            const GraphMorphism& m) {
  if (!l.is_injective()) throw TypingError("pushout_complement: l must be injective");
  std::set<NodeId> kept_nodes;
  std::set<EdgeId> kept_edges;
  for (const auto& [k, v] : l.nodes) kept_nodes.insert(v);
  for (const auto& [k, v] : l.edges) kept_edges.insert(v);
  detail::DeletionSet del;
  if (auto v = detail::check_deletion(pattern, kept_nodes, kept_edges, m, host, del)) return *v;

  PushoutComplement out{host, {}, {}};
  for (EdgeId e : del.edges) out.graph.remove_edge(e);
  for (NodeId n : del.nodes) out.graph.remove_node(n);
  out.into_host = GraphMorphism::identity(out.graph);
  out.from_interface = m.after(l);
  (void)interface;
  return out;
}

struct DisjointUnion {
  TypedGraph graph;
  GraphMorphism from_first;
  GraphMorphism from_second;
};

/// Tagged copies of A then B, renumbered 0.. in ascending identifier order.
inline DisjointUnion disjoint_union(const TypedGraph& a, const TypedGraph& b) {
  require_same_types(a, b, "disjoint_union");
  DisjointUnion out{TypedGraph(a.types()), {}, {}};
  auto copy = [&](const TypedGraph& g, GraphMorphism& into) {
    for (const auto& [id, n] : g.nodes()) {
      Node c = n;
      c.id = NodeId(out.graph.next_node_id());
      out.graph.insert_node(c);
      into.nodes[id] = c.id;
    }
    for (const auto& [id, e] : g.edges()) {
      into.edges[id] = out.graph.add_edge(e.type, into.nodes.at(e.source), into.nodes.at(e.target),
                                          e.label);
    }
  };
  copy(a, out.from_first);
  copy(b, out.from_second);
  return out;
}

enum class AttrComparison { Exact, Alpha, Ignore };

/// Bijective type-, structure- and attribute-preserving morphism, if any.
inline std::optional<GraphMorphism> find_isomorphism(const TypedGraph& a, const TypedGraph& b,
                                                     AttrComparison attrs = AttrComparison::Exact) {
  require_same_types(a, b, "is_isomorphic");
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return std::nullopt;
  std::map<std::string, int> type_counts;
  for (const auto& [id, n] : a.nodes()) ++type_counts[n.type];
  for (const auto& [id, n] : b.nodes()) --type_counts[n.type];
  for (const auto& [id, e] : a.edges()) ++type_counts["~" + e.type];
  for (const auto& [id, e] : b.edges()) --type_counts["~" + e.type];
  for (const auto& [t, c] : type_counts)
    if (c != 0) return std::nullopt;

  std::optional<GraphMorphism> found;
  auto visit = [&](const GraphMorphism& m) {
    found = m;
    return false;
  };
  switch (attrs) {
    case AttrComparison::Exact: {
      EqualAttrsPolicy p;
      for_each_homomorphism(a, b, true, p, visit);
      break;
    }
    case AttrComparison::Alpha: {
      AlphaAttrsPolicy p;
      for_each_homomorphism(a, b, true, p, visit);
      break;
    }
    case AttrComparison::Ignore: {
      StructuralPolicy p;
      for_each_homomorphism(a, b, true, p, visit);
      break;
    }
  }
  return found;
}

inline bool is_isomorphic(const TypedGraph& a, const TypedGraph& b,
                          AttrComparison attrs = AttrComparison::Exact) {
  return find_isomorphism(a, b, attrs).has_value();
}

}  // namespace aogg
