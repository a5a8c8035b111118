#pragma once

// Backtracking homomorphism search between typed graphs.
//
// Candidates are tried in ascending identifier order, so the sequence of
// reported morphisms is stable. Attribute handling is delegated to a policy:
//
//   bool accept(const Node& from, const Node& to);   // may record state
//   void release(const Node& from, const Node& to);  // undoes accept
//
// Policies must behave like a stack: release is called in reverse order of
// successful accepts.

#include "aogg/graph.hpp"

#include <functional>

namespace aogg {

/// Ignores attributes.
struct StructuralPolicy {
  bool accept(const Node&, const Node&) { return true; }
  void release(const Node&, const Node&) {}
};

/// Pattern matching of attribute terms with one shared variable binding.
struct BindingPolicy {
  Binding binding;
  std::vector<std::string> trail;
  std::vector<std::size_t> marks;

  bool accept(const Node& from, const Node& to) {
    marks.push_back(trail.size());
    for (const auto& [name, term] : from.attrs) {
      auto it = to.attrs.find(name);
      if (it == to.attrs.end() || !match_term(term, it->second, binding, trail)) {
        detail::undo_to(binding, trail, marks.back());
        marks.pop_back();
        return false;
      }
    }
    return true;
  }
  void release(const Node&, const Node&) {
    detail::undo_to(binding, trail, marks.back());
    marks.pop_back();
  }
};

/// Exact equality of attribute valuations.
struct EqualAttrsPolicy {
  bool accept(const Node& from, const Node& to) { return from.attrs == to.attrs; }
  void release(const Node&, const Node&) {}
};

/// Attribute equality up to a consistent bijective renaming of variables.
struct AlphaAttrsPolicy {
  VarRenaming renaming;
  std::vector<std::size_t> marks;

  bool accept(const Node& from, const Node& to) {
    marks.push_back(renaming.trail.size());
    if (from.attrs.size() != to.attrs.size()) {
      marks.pop_back();
      return false;
    }
    for (const auto& [name, term] : from.attrs) {
      auto it = to.attrs.find(name);
      if (it == to.attrs.end() || !renaming.alpha_equal(term, it->second)) {
        renaming.undo(marks.back());
        marks.pop_back();
        return false;
      }
    }
    return true;
  }
  void release(const Node&, const Node&) {
    renaming.undo(marks.back());
    marks.pop_back();
  }
};

namespace detail {

template <class Policy>
class HomSearch {
 public:
  using Visitor = std::function<bool(const GraphMorphism&)>;

  HomSearch(const TypedGraph& from, const TypedGraph& to, bool injective, Policy& policy,
            const GraphMorphism* seed)
      : from_(from), to_(to), injective_(injective), policy_(policy) {
    for (const auto& [id, n] : to_.nodes()) to_by_type_[n.type].push_back(id);
    for (const auto& [id, e] : to_.edges()) to_edges_[{e.source, e.target, e.type}].push_back(id);
    for (const auto& [id, e] : from_.edges()) {
      from_incident_[e.source].push_back(id);
      if (e.target != e.source) from_incident_[e.target].push_back(id);
    }
    if (seed) seed_ = *seed;
    order_nodes();
    for (const auto& [id, e] : from_.edges()) edge_order_.push_back(id);
  }

  /// Returns false when the visitor stopped the search early.
  bool run(const Visitor& visit) {
    visit_ = &visit;
    // seeded nodes go through the policy once, up front
    std::vector<std::pair<NodeId, NodeId>> accepted;
    bool ok = true;
    for (const auto& [a, b] : seed_.nodes) {
      const Node* an = from_.find_node(a);
      const Node* bn = to_.find_node(b);
      if (!an || !bn || an->type != bn->type || (injective_ && used_nodes_.count(b)) ||
          !policy_.accept(*an, *bn)) {
        ok = false;
        break;
      }
      accepted.emplace_back(a, b);
      current_.nodes[a] = b;
      used_nodes_.insert(b);
    }
    bool keep_going = true;
    if (ok) {
      for (const auto& [a, b] : seed_.nodes)
        if (!edges_to_assigned_ok(a)) ok = false;
    }
    if (ok) keep_going = assign_node(0);
    for (auto it = accepted.rbegin(); it != accepted.rend(); ++it)
      policy_.release(from_.node(it->first), to_.node(it->second));
    return keep_going;
  }

 private:
  struct EdgeKey {
    NodeId s, t;
    std::string type;
    auto operator<=>(const EdgeKey&) const = default;
  };

  void order_nodes() {
    std::set<NodeId> placed;
    for (const auto& [a, b] : seed_.nodes) placed.insert(a);
    std::map<NodeId, int> links;
    while (placed.size() < from_.node_count()) {
      NodeId best{};
      int best_links = -1;
      for (const auto& [id, n] : from_.nodes()) {
        if (placed.count(id)) continue;
        int l = 0;
        auto it = from_incident_.find(id);
        if (it != from_incident_.end())
          for (EdgeId e : it->second) {
            const Edge& ed = from_.edge(e);
            NodeId other = ed.source == id ? ed.target : ed.source;
            if (placed.count(other)) ++l;
          }
        if (l > best_links) {
          best_links = l;
          best = id;
        }
      }
      node_order_.push_back(best);
      placed.insert(best);
    }
  }

  const std::vector<EdgeId>& candidates(NodeId s, NodeId t, const std::string& type) const {
    static const std::vector<EdgeId> none;
    auto it = to_edges_.find(EdgeKey{s, t, type});
    return it == to_edges_.end() ? none : it->second;
  }

  bool edges_to_assigned_ok(NodeId a) const {
    auto it = from_incident_.find(a);
    if (it == from_incident_.end()) return true;
    for (EdgeId e : it->second) {
      const Edge& ed = from_.edge(e);
      auto s = current_.nodes.find(ed.source);
      auto t = current_.nodes.find(ed.target);
      if (s == current_.nodes.end() || t == current_.nodes.end()) continue;
      if (auto fixed = seed_.edges.find(e); fixed != seed_.edges.end()) {
        const Edge* img = to_.find_edge(fixed->second);
        if (!img || img->type != ed.type || img->source != s->second || img->target != t->second)
          return false;
        continue;
      }
      if (candidates(s->second, t->second, ed.type).empty()) return false;
    }
    return true;
  }

  bool assign_node(std::size_t depth) {
    if (depth == node_order_.size()) return assign_edge(0);
    NodeId a = node_order_[depth];
    const Node& an = from_.node(a);
    auto it = to_by_type_.find(an.type);
    if (it == to_by_type_.end()) return true;
    for (NodeId b : it->second) {
      if (injective_ && used_nodes_.count(b)) continue;
      current_.nodes[a] = b;
      if (!edges_to_assigned_ok(a)) {
        current_.nodes.erase(a);
        continue;
      }
      const Node& bn = to_.node(b);
      if (!policy_.accept(an, bn)) {
        current_.nodes.erase(a);
        continue;
      }
      used_nodes_.insert(b);
      bool cont = assign_node(depth + 1);
      used_nodes_.erase(b);
      policy_.release(an, bn);
      current_.nodes.erase(a);
      if (!cont) return false;
    }
    return true;
  }

  bool assign_edge(std::size_t depth) {
    if (depth == edge_order_.size()) return (*visit_)(current_);
    EdgeId e = edge_order_[depth];
    const Edge& ed = from_.edge(e);
    NodeId s = current_.nodes.at(ed.source);
    NodeId t = current_.nodes.at(ed.target);
    auto try_one = [&](EdgeId b) -> bool {
      if (injective_ && used_edges_.count(b)) return true;
      current_.edges[e] = b;
      used_edges_.insert(b);
      bool cont = assign_edge(depth + 1);
      used_edges_.erase(b);
      current_.edges.erase(e);
      return cont;
    };
    if (auto fixed = seed_.edges.find(e); fixed != seed_.edges.end()) return try_one(fixed->second);
    for (EdgeId b : candidates(s, t, ed.type))
      if (!try_one(b)) return false;
    return true;
  }

  const TypedGraph& from_;
  const TypedGraph& to_;
  bool injective_;
  Policy& policy_;
  GraphMorphism seed_;
  const Visitor* visit_ = nullptr;

  std::map<std::string, std::vector<NodeId>> to_by_type_;
  std::map<EdgeKey, std::vector<EdgeId>> to_edges_;
  std::map<NodeId, std::vector<EdgeId>> from_incident_;
  std::vector<NodeId> node_order_;
  std::vector<EdgeId> edge_order_;

  GraphMorphism current_;
  std::set<NodeId> used_nodes_;
  std::set<EdgeId> used_edges_;
};

}  // namespace detail

/// Calls `visit` for every morphism from `from` to `to` that extends `seed`
/// (when given). The visitor returns false to stop. Returns false when stopped.
template <class Policy, class Visitor>
bool for_each_homomorphism(const TypedGraph& from, const TypedGraph& to, bool injective,
                           Policy& policy, Visitor&& visit, const GraphMorphism* seed = nullptr) {
  detail::HomSearch<Policy> search(from, to, injective, policy, seed);
  std::function<bool(const GraphMorphism&)> fn = std::forward<Visitor>(visit);
  return search.run(fn);
}

/// Every type- and structure-preserving homomorphism from `from` to `to`.
/// Attribute valuations are ignored.
inline std::vector<GraphMorphism> find_homomorphisms(const TypedGraph& from, const TypedGraph& to,
                                                     bool injective_only) {
  require_same_types(from, to, "find_homomorphisms");
  std::vector<GraphMorphism> out;
  StructuralPolicy policy;
  for_each_homomorphism(from, to, injective_only, policy, [&](const GraphMorphism& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

}  // namespace aogg
