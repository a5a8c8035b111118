#pragma once

// Test helpers: fixture access, random generators and brute-force oracles.
// The oracles deliberately avoid the library's search code.

#include "aogg/aogg.hpp"

#include <random>

namespace testing_support {

using namespace aogg;

inline std::string fixture(const std::string& name) { return std::string(AOGG_FIXTURE_DIR) + "/" + name; }

inline Loaded load_fixture(const std::string& name = "client_server.aogg") { return load_grammar_file(fixture(name)); }

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(engine); }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
  }
};

// ---------------------------------------------------------------------------
// Generators

inline TypeGraph random_type_graph(Rng& rng, int max_nodes = 5, int max_edges = 6, bool attrs = true) {
  TypeGraph t;
  const int n = rng.uniform(1, max_nodes);
  const int m = rng.uniform(0, max_edges);
  for (int i = 0; i < n; ++i) {
    NodeType nt{"N" + std::to_string(i), {}};
    if (attrs)
      for (int a = rng.uniform(0, 2); a > 0; --a)
        nt.attrs.push_back(AttrDecl{"a" + std::to_string(a), rng.coin() ? Sort::Int : Sort::String});
    t.add_node_type(std::move(nt));
  }
  for (int j = 0; j < m; ++j)
    t.add_edge_type(EdgeType{"E" + std::to_string(j), "N" + std::to_string(rng.uniform(0, n - 1)),
                             "N" + std::to_string(rng.uniform(0, n - 1))});
  return t;
}

inline AttrTerm random_literal(Rng& rng, Sort s) {
  if (s == Sort::Int) return AttrTerm::lit(rng.uniform(0, 2));
  if (s == Sort::Bool) return AttrTerm::lit(rng.coin());
  return AttrTerm::lit(std::string(1, static_cast<char>('a' + rng.uniform(0, 2))));
}

inline std::vector<std::string> type_names(const TypeGraph& t, bool edges) {
  std::vector<std::string> out;
  if (edges)
    for (const auto& [n, e] : t.edge_types()) out.push_back(n);
  else
    for (const auto& [n, e] : t.node_types()) out.push_back(n);
  return out;
}

/// Random graph with literal attributes.
inline TypedGraph random_graph(Rng& rng, const TypeGraphPtr& t, int max_nodes, int max_edges) {
  TypedGraph g(t);
  const auto node_types = type_names(*t, false);
  const int n = rng.uniform(0, max_nodes);
  for (int i = 0; i < n; ++i) {
    const auto& type = rng.pick(node_types);
    std::map<std::string, AttrTerm> attrs;
    for (const auto& a : t->find_node_type(type)->attrs) attrs.emplace(a.name, random_literal(rng, a.sort));
    g.add_node(type, attrs, "v" + std::to_string(i));
  }
  const auto edge_types = type_names(*t, true);
  if (edge_types.empty() || n == 0) return g;
  const int m = rng.uniform(0, max_edges);
  for (int j = 0; j < m; ++j) {
    const EdgeType& et = *t->find_edge_type(rng.pick(edge_types));
    std::vector<NodeId> srcs, tgts;
    for (const auto& [id, node] : g.nodes()) {
      if (node.type == et.source) srcs.push_back(id);
      if (node.type == et.target) tgts.push_back(id);
    }
    if (srcs.empty() || tgts.empty()) continue;
    g.add_edge(et.name, rng.pick(srcs), rng.pick(tgts));
  }
  return g;
}

/// Random well-formed rule with at most `max_elems` elements per component.
/// Left-hand attributes are distinct variables; right-hand ones reuse them
/// or are literals.
inline Rule random_rule(Rng& rng, const TypeGraphPtr& t, int max_elems = 6, const std::string& name = "r") {
  const auto node_types = type_names(*t, false);
  const auto edge_types = type_names(*t, true);
  TypedGraph left(t), right(t);
  Preserved kept;
  int var_count = 0;
  std::map<Sort, std::vector<std::string>> vars_by_sort;

  auto add_edges = [&](TypedGraph& g, int budget, const std::vector<NodeId>& pool) {
    for (int k = 0; k < budget && !edge_types.empty(); ++k) {
      const EdgeType& et = *t->find_edge_type(rng.pick(edge_types));
      std::vector<NodeId> srcs, tgts;
      for (NodeId id : pool) {
        if (g.node(id).type == et.source) srcs.push_back(id);
        if (g.node(id).type == et.target) tgts.push_back(id);
      }
      if (srcs.empty() || tgts.empty()) continue;
      g.add_edge(et.name, rng.pick(srcs), rng.pick(tgts));
    }
  };

  const int l_nodes = rng.uniform(1, std::max(1, max_elems / 2 + 1));
  std::vector<NodeId> l_ids;
  for (int i = 0; i < l_nodes; ++i) {
    const auto& type = rng.pick(node_types);
    std::map<std::string, AttrTerm> attrs;
    for (const auto& a : t->find_node_type(type)->attrs) {
      std::string v = "x" + std::to_string(var_count++);
      vars_by_sort[a.sort].push_back(v);
      attrs.emplace(a.name, AttrTerm::var(v));
    }
    l_ids.push_back(left.add_node(type, attrs));
  }
  add_edges(left, rng.uniform(0, max_elems - l_nodes), l_ids);

  std::map<NodeId, NodeId> to_right;
  for (NodeId id : l_ids) {
    if (!rng.coin(0.6)) continue;
    const Node& ln = left.node(id);
    std::map<std::string, AttrTerm> attrs;
    for (const auto& a : t->find_node_type(ln.type)->attrs) {
      const auto& pool = vars_by_sort[a.sort];
      attrs.emplace(a.name, rng.coin(0.7)  ? ln.attrs.at(a.name)
                            : rng.coin()   ? AttrTerm::var(rng.pick(pool))
                                           : random_literal(rng, a.sort));
    }
    to_right[id] = right.add_node(ln.type, attrs);
    kept.nodes.emplace_back(id, to_right[id]);
  }
  for (const auto& [id, e] : left.edges())
    if (to_right.count(e.source) && to_right.count(e.target) && rng.coin(0.7))
      kept.edges.emplace_back(id, right.add_edge(e.type, to_right[e.source], to_right[e.target]));

  int budget = max_elems - static_cast<int>(right.node_count() + right.edge_count());
  const int new_nodes = budget > 0 ? rng.uniform(0, std::min(budget, 2)) : 0;
  for (int i = 0; i < new_nodes; ++i) {
    const auto& type = rng.pick(node_types);
    std::map<std::string, AttrTerm> attrs;
    for (const auto& a : t->find_node_type(type)->attrs) {
      const auto& pool = vars_by_sort[a.sort];
      attrs.emplace(a.name, !pool.empty() && rng.coin() ? AttrTerm::var(rng.pick(pool)) : random_literal(rng, a.sort));
    }
    right.add_node(type, attrs);
  }
  std::vector<NodeId> r_ids;
  for (const auto& [id, n] : right.nodes()) r_ids.push_back(id);
  budget = max_elems - static_cast<int>(right.node_count() + right.edge_count());
  if (budget > 0 && !r_ids.empty()) add_edges(right, rng.uniform(0, budget), r_ids);
  return make_rule(name, std::move(left), std::move(right), kept);
}

// ---------------------------------------------------------------------------
// Oracles

/// Number of structure- and type-preserving maps A -> B, by exhaustive
/// enumeration of all node assignments and then all edge assignments.
inline std::size_t brute_hom_count(const TypedGraph& a, const TypedGraph& b, bool injective) {
  std::vector<NodeId> an, bn;
  std::vector<EdgeId> ae, be;
  for (const auto& [id, n] : a.nodes()) an.push_back(id);
  for (const auto& [id, n] : b.nodes()) bn.push_back(id);
  for (const auto& [id, e] : a.edges()) ae.push_back(id);
  for (const auto& [id, e] : b.edges()) be.push_back(id);
  if (!an.empty() && bn.empty()) return 0;
  std::size_t total = 0;
  std::vector<std::size_t> pick(an.size(), 0);
  while (true) {
    bool ok = true;
    std::set<std::size_t> used;
    for (std::size_t i = 0; i < an.size() && ok; ++i) {
      ok = a.node(an[i]).type == b.node(bn[pick[i]]).type;
      if (injective && !used.insert(pick[i]).second) ok = false;
    }
    if (ok) {
      // count edge assignments
      std::map<NodeId, NodeId> f;
      for (std::size_t i = 0; i < an.size(); ++i) f[an[i]] = bn[pick[i]];
      std::vector<std::size_t> epick(ae.size(), 0);
      if (ae.empty()) {
        ++total;
      } else if (!be.empty()) {
        while (true) {
          bool eok = true;
          std::set<std::size_t> eused;
          for (std::size_t j = 0; j < ae.size() && eok; ++j) {
            const Edge& x = a.edge(ae[j]);
            const Edge& y = b.edge(be[epick[j]]);
            eok = x.type == y.type && f[x.source] == y.source && f[x.target] == y.target;
            if (injective && !eused.insert(epick[j]).second) eok = false;
          }
          if (eok) ++total;
          std::size_t k = 0;
          while (k < epick.size() && ++epick[k] == be.size()) epick[k++] = 0;
          if (k == epick.size()) break;
        }
      }
    }
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == bn.size()) pick[k++] = 0;
    if (k == pick.size()) break;
  }
  return total;
}

/// Number of nonempty partial isomorphisms between A and B that respect types
/// and pair edges only between paired endpoints.
inline std::size_t brute_overlap_count(const TypedGraph& a, const TypedGraph& b) {
  std::vector<NodeId> an, bn;
  std::vector<EdgeId> ae, be;
  for (const auto& [id, n] : a.nodes()) an.push_back(id);
  for (const auto& [id, n] : b.nodes()) bn.push_back(id);
  for (const auto& [id, e] : a.edges()) ae.push_back(id);
  for (const auto& [id, e] : b.edges()) be.push_back(id);
  std::size_t total = 0;
  // choice bn.size() means "not paired"
  std::vector<std::size_t> pick(an.size(), 0);
  auto advance = [](std::vector<std::size_t>& v, std::size_t base) {
    std::size_t k = 0;
    while (k < v.size() && ++v[k] == base) v[k++] = 0;
    return k < v.size();
  };
  while (true) {
    bool ok = true, any = false;
    std::set<std::size_t> used;
    std::map<NodeId, NodeId> f;
    for (std::size_t i = 0; i < an.size() && ok; ++i) {
      if (pick[i] == bn.size()) continue;
      any = true;
      ok = a.node(an[i]).type == b.node(bn[pick[i]]).type && used.insert(pick[i]).second;
      f[an[i]] = bn[pick[i]];
    }
    if (ok && any) {
      std::vector<std::size_t> epick(ae.size(), 0);
      while (true) {
        bool eok = true;
        std::set<std::size_t> eused;
        for (std::size_t j = 0; j < ae.size() && eok; ++j) {
          if (epick[j] == be.size()) continue;
          const Edge& x = a.edge(ae[j]);
          const Edge& y = b.edge(be[epick[j]]);
          eok = x.type == y.type && f.count(x.source) && f.count(x.target) && f[x.source] == y.source &&
                f[x.target] == y.target && eused.insert(epick[j]).second;
        }
        if (eok) ++total;
        if (ae.empty() || !advance(epick, be.size() + 1)) break;
      }
    }
    if (an.empty() || !advance(pick, bn.size() + 1)) break;
  }
  return total;
}

/// Closed-form size of R(T).
struct Size {
  std::size_t nodes, edges;
  bool operator==(const Size&) const = default;
};

inline Size expected_encoding_types(const TypeGraph& t) {
  const std::size_t n = t.node_type_count(), m = t.edge_type_count();
  return {3 * (n + m) + 1, 6 * m + 2 * (n + m) + 3 * (n + m)};
}

inline Size expected_rule_encoding(const Rule& r) {
  std::size_t elems = 0, edges = 0;
  for (const TypedGraph* g : {&r.left, &r.interface, &r.right}) {
    elems += g->node_count() + g->edge_count();
    edges += g->edge_count();
  }
  const std::size_t k = r.interface.node_count() + r.interface.edge_count();
  return {elems + 1, 2 * edges + 2 * k + elems};
}

}  // namespace testing_support
