#pragma once

// Critical pair analysis. Candidate situations are overlaps of two rule
// patterns: partial isomorphisms between them, glued into a minimal host.

#include "aogg/encoding.hpp"

#include <chrono>

namespace aogg {

/// Pairs (element of A, element of B) identified by an overlap.
struct Overlap {
  std::vector<std::pair<NodeId, NodeId>> nodes;
  std::vector<std::pair<EdgeId, EdgeId>> edges;

  bool empty() const { return nodes.empty(); }
};

/// Calls `visit` for every nonempty type-respecting partial isomorphism
/// between A and B. Edges may only be paired when their endpoints are.
/// `allow` filters node pairs early. Returns false when the visitor stopped.
template <class Visitor, class NodeFilter>
bool for_each_overlap(const TypedGraph& a, const TypedGraph& b, Visitor&& visit, NodeFilter&& allow) {
  std::vector<NodeId> a_nodes;
  std::vector<EdgeId> a_edges;
  for (const auto& [id, n] : a.nodes()) a_nodes.push_back(id);
  for (const auto& [id, e] : a.edges()) a_edges.push_back(id);
  std::map<NodeId, NodeId> node_map;
  std::set<NodeId> used_nodes;
  std::set<EdgeId> used_edges;
  Overlap current;

  std::function<bool(std::size_t)> edges_step = [&](std::size_t i) -> bool {
    if (i == a_edges.size()) return current.empty() ? true : visit(static_cast<const Overlap&>(current));
    if (!edges_step(i + 1)) return false;
    const Edge& ea = a.edge(a_edges[i]);
    auto s = node_map.find(ea.source);
    auto t = node_map.find(ea.target);
    if (s == node_map.end() || t == node_map.end()) return true;
    for (const auto& [idb, eb] : b.edges()) {
      if (used_edges.count(idb) || eb.type != ea.type || eb.source != s->second || eb.target != t->second)
        continue;
      used_edges.insert(idb);
      current.edges.emplace_back(a_edges[i], idb);
      bool cont = edges_step(i + 1);
      current.edges.pop_back();
      used_edges.erase(idb);
      if (!cont) return false;
    }
    return true;
  };
  std::function<bool(std::size_t)> nodes_step = [&](std::size_t i) -> bool {
    if (i == a_nodes.size()) return edges_step(0);
    if (!nodes_step(i + 1)) return false;
    const Node& na = a.node(a_nodes[i]);
    for (const auto& [idb, nb] : b.nodes()) {
      if (used_nodes.count(idb) || nb.type != na.type || !allow(na, nb)) continue;
      used_nodes.insert(idb);
      node_map[a_nodes[i]] = idb;
      current.nodes.emplace_back(a_nodes[i], idb);
      bool cont = nodes_step(i + 1);
      current.nodes.pop_back();
      node_map.erase(a_nodes[i]);
      used_nodes.erase(idb);
      if (!cont) return false;
    }
    return true;
  };
  return nodes_step(0);
}

/// All structural overlaps of A and B (attributes ignored).
inline std::vector<Overlap> enumerate_overlaps(const TypedGraph& a, const TypedGraph& b) {
  std::vector<Overlap> out;
  for_each_overlap(
      a, b,
      [&](const Overlap& o) {
        out.push_back(o);
        return true;
      },
      [](const Node&, const Node&) { return true; });
  return out;
}

struct Glue {
  TypedGraph graph;
  GraphMorphism from_a, from_b;
};

/// A together with the part of B not identified by the overlap.
inline Glue glue(const TypedGraph& a, const TypedGraph& b, const Overlap& o) {
  Glue out{TypedGraph(a.types()), {}, {}};
  for (const auto& [id, n] : a.nodes()) out.from_a.nodes[id] = out.graph.add_node(n.type, n.attrs, n.label);
  for (const auto& [id, e] : a.edges())
    out.from_a.edges[id] = out.graph.add_edge(e.type, out.from_a(e.source), out.from_a(e.target), e.label);
  for (const auto& [x, y] : o.nodes) out.from_b.nodes[y] = out.from_a(x);
  for (const auto& [x, y] : o.edges) out.from_b.edges[y] = out.from_a(x);
  for (const auto& [id, n] : b.nodes())
    if (!out.from_b.nodes.count(id)) out.from_b.nodes[id] = out.graph.add_node(n.type, n.attrs, n.label);
  for (const auto& [id, e] : b.edges())
    if (!out.from_b.edges.count(id))
      out.from_b.edges[id] = out.graph.add_edge(e.type, out.from_b(e.source), out.from_b(e.target), e.label);
  return out;
}

// ---------------------------------------------------------------------------
// Attribute access

using AttrSlot = std::pair<NodeId, std::string>;

/// Attributes of L nodes whose value influences the rule: literals (which
/// restrict matches) and variables used anywhere other than to copy the value
/// back unchanged into the same attribute.
inline std::set<AttrSlot> attr_reads(const Rule& rule) {
  std::map<std::string, int> occurrences;
  auto count = [&](const AttrTerm& t, auto&& self) -> void {
    if (t.is_var()) ++occurrences[t.var_name()];
    if (t.is_concat())
      for (const auto& p : t.parts()) self(p, self);
  };
  for (const TypedGraph* g : {&rule.left, &rule.right})
    for (const auto& [id, n] : g->nodes())
      for (const auto& [a, t] : n.attrs) count(t, count);
  const GraphMorphism l_inv = rule.l_inverse();
  std::set<AttrSlot> out;
  for (const auto& [id, n] : rule.left.nodes())
    for (const auto& [a, t] : n.attrs) {
      if (t.is_literal()) {
        out.emplace(id, a);
        continue;
      }
      if (!t.is_var()) {
        out.emplace(id, a);
        continue;
      }
      int own = 1;
      if (auto k = l_inv.nodes.find(id); k != l_inv.nodes.end())
        if (rule.right.node(rule.r(k->second)).attrs.at(a) == t) own = 2;
      if (occurrences[t.var_name()] > own) out.emplace(id, a);
    }
  return out;
}

/// Attributes of preserved nodes whose right-hand term differs from the
/// left-hand one, keyed by the L node.
inline std::set<AttrSlot> attr_writes(const Rule& rule) {
  std::set<AttrSlot> out;
  for (const auto& [k, n] : rule.interface.nodes()) {
    const Node& ln = rule.left.node(rule.l(k));
    const Node& rn = rule.right.node(rule.r(k));
    for (const auto& [a, t] : rn.attrs)
      if (!(ln.attrs.at(a) == t)) out.emplace(rule.l(k), a);
  }
  return out;
}

/// Attributes of L nodes that restrict where the rule matches: non-variable
/// terms and variables occurring more than once in L.
inline std::set<AttrSlot> attr_guards(const Rule& rule) {
  std::map<std::string, int> occurrences;
  for (const auto& [id, n] : rule.left.nodes())
    for (const auto& [a, t] : n.attrs)
      if (t.is_var()) ++occurrences[t.var_name()];
  std::set<AttrSlot> out;
  for (const auto& [id, n] : rule.left.nodes())
    for (const auto& [a, t] : n.attrs)
      if (!t.is_var() || occurrences[t.var_name()] > 1) out.emplace(id, a);
  return out;
}

/// The same rule read right to left.
inline Rule inverse_rule(const Rule& r) {
  Rule out{r.name, r.reflected_name, r.right, r.interface, r.left, r.r, r.l};
  return out;
}

namespace detail {

/// Union-find over variables of two rules ("1:x", "2:x") with at most one
/// literal per class. Compound terms are treated as compatible with anything.
class AttrUnifier {
 public:
  bool unify(const AttrTerm& a, const std::string& pa, const AttrTerm& b, const std::string& pb) {
    if (!(a.is_var() || a.is_literal()) || !(b.is_var() || b.is_literal())) return true;
    if (a.is_literal() && b.is_literal()) return a.literal() == b.literal();
    if (a.is_var() && b.is_var()) return join(pa + a.var_name(), pb + b.var_name());
    if (a.is_var()) return bind(pa + a.var_name(), b.literal());
    return bind(pb + b.var_name(), a.literal());
  }

 private:
  std::string find(const std::string& x) {
    auto it = parent_.find(x);
    if (it == parent_.end() || it->second == x) return x;
    std::string root = find(it->second);
    parent_[x] = root;
    return root;
  }
  bool bind(const std::string& v, const Value& val) {
    std::string r = find(v);
    auto it = value_.find(r);
    if (it != value_.end()) return it->second == val;
    value_.emplace(r, val);
    return true;
  }
  bool join(const std::string& x, const std::string& y) {
    std::string rx = find(x), ry = find(y);
    if (rx == ry) return true;
    auto vx = value_.find(rx), vy = value_.find(ry);
    if (vx != value_.end() && vy != value_.end() && !(vx->second == vy->second)) return false;
    parent_[rx] = ry;
    if (vx != value_.end() && vy == value_.end()) value_.emplace(ry, vx->second);
    return true;
  }
  std::map<std::string, std::string> parent_;
  std::map<std::string, Value> value_;
};

inline bool literals_clash(const Node& a, const Node& b) {
  for (const auto& [name, t] : a.attrs) {
    auto it = b.attrs.find(name);
    if (it != b.attrs.end() && t.is_literal() && it->second.is_literal() && !(t.literal() == it->second.literal()))
      return true;
  }
  return false;
}

inline bool attributes_unify(const TypedGraph& a, const TypedGraph& b, const Overlap& o) {
  AttrUnifier u;
  for (const auto& [x, y] : o.nodes) {
    const Node& na = a.node(x);
    const Node& nb = b.node(y);
    for (const auto& [name, t] : na.attrs)
      if (!u.unify(t, "1:", nb.attrs.at(name), "2:")) return false;
  }
  return true;
}

inline bool is_identity_overlap(const TypedGraph& g, const Overlap& o) {
  if (o.nodes.size() != g.node_count() || o.edges.size() != g.edge_count()) return false;
  for (const auto& [x, y] : o.nodes)
    if (x != y) return false;
  for (const auto& [x, y] : o.edges)
    if (x != y) return false;
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Critical pairs

enum class PairKind { DeleteUse, AttrWriteRead, AttrWriteWrite, ProduceUse };

inline std::string_view to_string(PairKind k) {
  switch (k) {
    case PairKind::DeleteUse: return "delete-use";
    case PairKind::AttrWriteRead: return "attr-write-read";
    case PairKind::AttrWriteWrite: return "attr-write-write";
    case PairKind::ProduceUse: return "produce-use";
  }
  return "";
}

struct CriticalPair {
  std::string first, second;
  Overlap overlap;
  std::set<PairKind> kinds;
  std::vector<std::string> witnesses;  // human-readable, one per offending element
};

struct CpaOptions {
  /// Upper bound on overlaps examined per rule pair; 0 means unbounded.
  std::size_t overlap_bound = 0;
};

/// One matrix of critical pair counts. Cell (a, b) counts the ways in which
/// applying `a` disables, or enables, an application of `b`.
struct CpaMatrix {
  std::vector<std::string> rules;
  std::map<std::pair<std::string, std::string>, std::vector<CriticalPair>> cells;
  bool truncated = false;

  std::size_t count(const std::string& a, const std::string& b) const {
    auto it = cells.find({a, b});
    return it == cells.end() ? 0 : it->second.size();
  }
  bool all_zero() const {
    for (const auto& [k, v] : cells)
      if (!v.empty()) return false;
    return true;
  }
  std::vector<std::pair<std::string, std::string>> nonzero() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& a : rules)
      for (const auto& b : rules)
        if (count(a, b)) out.emplace_back(a, b);
    return out;
  }
};

namespace detail {

inline std::string slot_text(const TypedGraph& g, NodeId n, const std::string& attr) {
  return describe(g, n) + "." + attr;
}

/// Shared driver: overlaps of `a_side` (first rule's pattern) with r2's left
/// side, checked for gluing under `first_app` and r2, then classified.
template <class Classify>
bool collect_pairs(const Rule& first_app, const TypedGraph& a_side, const Rule& r2, bool exclude_identity,
                   const CpaOptions& opt, std::vector<CriticalPair>& out, Classify&& classify) {
  std::size_t seen = 0;
  bool complete = for_each_overlap(
      a_side, r2.left,
      [&](const Overlap& o) {
        if (opt.overlap_bound && ++seen > opt.overlap_bound) return false;
        if (exclude_identity && is_identity_overlap(a_side, o)) return true;
        if (!attributes_unify(a_side, r2.left, o)) return true;
        Glue g = glue(a_side, r2.left, o);
        if (check_gluing(first_app, Match{first_app.name, g.from_a, {}}, g.graph)) return true;
        if (check_gluing(r2, Match{r2.name, g.from_b, {}}, g.graph)) return true;
        CriticalPair cp;
        classify(o, cp);
        if (!cp.kinds.empty()) out.push_back(std::move(cp));
        return true;
      },
      [](const Node& x, const Node& y) { return !literals_clash(x, y); });
  return complete;
}

}  // namespace detail

/// Critical pairs in which applying r1 disables r2 or changes what r2 reads.
inline std::vector<CriticalPair> conflicts(const Rule& r1, const Rule& r2, const CpaOptions& opt = {},
                                           bool* complete = nullptr) {
  require_same_types(r1.left, r2.left, "conflicts");
  std::vector<CriticalPair> out;
  const auto l1_inv = r1.l_inverse();
  const auto writes1 = attr_writes(r1), writes2 = attr_writes(r2), reads2 = attr_reads(r2);
  bool done = detail::collect_pairs(r1, r1.left, r2, &r1 == &r2 || r1.name == r2.name, opt, out,
                                    [&](const Overlap& o, CriticalPair& cp) {
    cp.first = r1.name;
    cp.second = r2.name;
    cp.overlap = o;
    for (const auto& [x, y] : o.nodes) {
      if (!l1_inv.nodes.count(x)) {
        cp.kinds.insert(PairKind::DeleteUse);
        cp.witnesses.push_back("deletes " + describe(r1.left, x));
        continue;
      }
      for (const auto& [a, t] : r1.left.node(x).attrs) {
        if (!writes1.count({x, a})) continue;
        if (reads2.count({y, a})) {
          cp.kinds.insert(PairKind::AttrWriteRead);
          cp.witnesses.push_back("writes " + detail::slot_text(r1.left, x, a) + " read by " + r2.name);
        }
        if (writes2.count({y, a})) {
          cp.kinds.insert(PairKind::AttrWriteWrite);
          cp.witnesses.push_back("writes " + detail::slot_text(r1.left, x, a) + " also written by " + r2.name);
        }
      }
    }
    for (const auto& [x, y] : o.edges)
      if (!l1_inv.edges.count(x)) {
        cp.kinds.insert(PairKind::DeleteUse);
        cp.witnesses.push_back("deletes " + describe(r1.left, x));
      }
  });
  if (complete) *complete = done;
  return out;
}

/// Critical pairs in which applying r1 enables r2: r2 uses an element r1
/// creates, or an attribute value r1 writes decides whether r2 matches.
inline std::vector<CriticalPair> dependencies(const Rule& r1, const Rule& r2, const CpaOptions& opt = {},
                                              bool* complete = nullptr) {
  require_same_types(r1.right, r2.left, "dependencies");
  std::vector<CriticalPair> out;
  const Rule inv = inverse_rule(r1);
  const auto r1_inv = r1.r_inverse();
  std::set<AttrSlot> writes_r;
  for (const auto& [n, a] : attr_writes(r1)) writes_r.emplace(r1.r(r1.l_inverse()(n)), a);
  const auto guards2 = attr_guards(r2);
  bool done = detail::collect_pairs(inv, r1.right, r2, false, opt, out, [&](const Overlap& o, CriticalPair& cp) {
    cp.first = r1.name;
    cp.second = r2.name;
    cp.overlap = o;
    for (const auto& [x, y] : o.nodes) {
      if (!r1_inv.nodes.count(x)) {
        cp.kinds.insert(PairKind::ProduceUse);
        cp.witnesses.push_back("creates " + describe(r1.right, x));
        continue;
      }
      for (const auto& [a, t] : r1.right.node(x).attrs)
        if (writes_r.count({x, a}) && guards2.count({y, a})) {
          cp.kinds.insert(PairKind::AttrWriteRead);
          cp.witnesses.push_back("writes " + detail::slot_text(r1.right, x, a) + " tested by " + r2.name);
        }
    }
    for (const auto& [x, y] : o.edges)
      if (!r1_inv.edges.count(x)) {
        cp.kinds.insert(PairKind::ProduceUse);
        cp.witnesses.push_back("creates " + describe(r1.right, x));
      }
  });
  if (complete) *complete = done;
  return out;
}

inline CpaMatrix analyze_conflicts(const std::vector<Rule>& rules, const CpaOptions& opt = {}) {
  CpaMatrix m;
  for (const auto& r : rules) m.rules.push_back(r.name);
  for (const auto& a : rules)
    for (const auto& b : rules) {
      bool complete = true;
      m.cells[{a.name, b.name}] = conflicts(a, b, opt, &complete);
      m.truncated = m.truncated || !complete;
    }
  return m;
}

inline CpaMatrix analyze_dependencies(const std::vector<Rule>& rules, const CpaOptions& opt = {}) {
  CpaMatrix m;
  for (const auto& r : rules) m.rules.push_back(r.name);
  for (const auto& a : rules)
    for (const auto& b : rules) {
      bool complete = true;
      m.cells[{a.name, b.name}] = dependencies(a, b, opt, &complete);
      m.truncated = m.truncated || !complete;
    }
  return m;
}

struct CpaReport {
  CpaMatrix conflicts, dependencies;
  double seconds = 0;
};

inline CpaReport analyze(const std::vector<Rule>& rules, const CpaOptions& opt = {}) {
  auto start = std::chrono::steady_clock::now();
  CpaReport r{analyze_conflicts(rules, opt), analyze_dependencies(rules, opt), 0};
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// CPA over the encoded advices of an AOGG.
inline CpaReport analyze_weaving(const AOGG& d, const CpaOptions& opt = {}) {
  return analyze(encode_aogg(d).rules, opt);
}

struct Interference {
  bool order_independent = true;
  /// Nonzero cells between advices of different aspects, with the matrix
  /// ("conflict" or "dependency") they come from.
  std::vector<std::tuple<std::string, std::string, std::string>> cells;
};

inline std::string aspect_of(const std::string& encoded_rule) {
  return encoded_rule.substr(0, encoded_rule.find('.'));
}

/// Nonzero weaving-level cells that couple advices of different aspects.
inline Interference cross_aspect_interference(const CpaReport& weaving) {
  Interference out;
  auto scan = [&](const CpaMatrix& m, const std::string& kind) {
    for (const auto& [a, b] : m.nonzero())
      if (aspect_of(a) != aspect_of(b)) out.cells.emplace_back(kind, a, b);
  };
  scan(weaving.conflicts, "conflict");
  scan(weaving.dependencies, "dependency");
  out.order_independent = out.cells.empty();
  return out;
}

}  // namespace aogg
