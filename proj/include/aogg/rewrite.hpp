#pragma once

// DPO rules, matching, rule application and nondeterministic grammar
// execution.

#include "aogg/constructions.hpp"

#include <random>

namespace aogg {

struct UnboundVar : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Interface graphs carry no attribute constraints; every interface attribute
/// holds the reserved variable "_<attribute name>".
inline AttrTerm interface_term(const std::string& attr) { return AttrTerm::var("_" + attr); }

inline std::map<std::string, AttrTerm> interface_attrs(const TypeGraph& t, const std::string& type) {
  std::map<std::string, AttrTerm> out;
  for (const auto& a : t.find_node_type(type)->attrs) out.emplace(a.name, interface_term(a.name));
  return out;
}

/// Monic span L <-l- K -r-> R.
struct Rule {
  std::string name;
  /// Name reported by rulename(). Woven rules keep the name of the base rule
  /// they were derived from.
  std::string reflected_name;
  TypedGraph left, interface, right;
  GraphMorphism l, r;

  const std::string& display_name() const { return reflected_name.empty() ? name : reflected_name; }

  bool deletes(NodeId n) const { return !l_inverse().nodes.count(n); }

  GraphMorphism l_inverse() const { return l.inverse(); }
  GraphMorphism r_inverse() const { return r.inverse(); }
};

struct Preserved {
  std::vector<std::pair<NodeId, NodeId>> nodes;  // (L id, R id)
  std::vector<std::pair<EdgeId, EdgeId>> edges;
};

/// Builds the interface from the preserved pairs. Interface identifiers are
/// the left-hand identifiers.
inline Rule make_rule(std::string name, TypedGraph left, TypedGraph right, const Preserved& kept) {
  require_same_types(left, right, "make_rule");
  Rule rule{name, name, std::move(left), TypedGraph(right.types()), std::move(right), {}, {}};
  for (const auto& [a, b] : kept.nodes) {
    const Node& ln = rule.left.node(a);
    const Node& rn = rule.right.node(b);
    if (ln.type != rn.type)
      throw TypingError("rule '" + name + "': preserved node '" + ln.label + "' changes type");
    rule.interface.insert_node(
        Node{a, ln.type, interface_attrs(*rule.left.types(), ln.type), ln.label});
    rule.l.nodes[a] = a;
    rule.r.nodes[a] = b;
  }
  for (const auto& [a, b] : kept.edges) {
    const Edge& le = rule.left.edge(a);
    const Edge& re = rule.right.edge(b);
    if (le.type != re.type)
      throw TypingError("rule '" + name + "': preserved edge '" + le.label + "' changes type");
    rule.interface.insert_edge(Edge{a, le.type, le.source, le.target, le.label});
    rule.l.edges[a] = a;
    rule.r.edges[a] = b;
  }
  return rule;
}

/// Elements carrying the same non-empty label on both sides are preserved.
inline Rule rule_from_labels(std::string name, TypedGraph left, TypedGraph right) {
  Preserved kept;
  for (const auto& [id, n] : left.nodes()) {
    if (n.label.empty()) continue;
    if (auto r = right.node_by_label(n.label)) kept.nodes.emplace_back(id, *r);
  }
  for (const auto& [id, e] : left.edges()) {
    if (e.label.empty()) continue;
    if (auto r = right.edge_by_label(e.label)) kept.edges.emplace_back(id, *r);
  }
  return make_rule(std::move(name), std::move(left), std::move(right), kept);
}

/// Identity rule on a graph.
inline Rule identity_rule(std::string name, const TypedGraph& g) {
  Preserved kept;
  for (const auto& [id, n] : g.nodes()) kept.nodes.emplace_back(id, id);
  for (const auto& [id, e] : g.edges()) kept.edges.emplace_back(id, id);
  return make_rule(std::move(name), g, g, kept);
}

inline Rule widened(const Rule& rule, const TypeGraphPtr& wider) {
  Rule out = rule;
  out.left = rule.left.widened(wider);
  out.interface = rule.interface.widened(wider);
  out.right = rule.right.widened(wider);
  return out;
}

struct Grammar {
  TypeGraphPtr types = std::make_shared<TypeGraph>();
  TypedGraph initial;
  std::vector<Rule> rules;

  const Rule* find_rule(std::string_view name) const {
    for (const auto& r : rules)
      if (r.name == name) return &r;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Rule validation

struct RuleViolation {
  enum class Kind { NotMonic, NotAMorphism, UnboundVar, InterfaceNotVars, TypeMismatch };
  Kind kind;
  std::string message;
};

inline std::string_view to_string(RuleViolation::Kind k) {
  switch (k) {
    case RuleViolation::Kind::NotMonic: return "NotMonic";
    case RuleViolation::Kind::NotAMorphism: return "NotAMorphism";
    case RuleViolation::Kind::UnboundVar: return "UnboundVar";
    case RuleViolation::Kind::InterfaceNotVars: return "InterfaceNotVars";
    case RuleViolation::Kind::TypeMismatch: return "TypeMismatch";
  }
  return "?";
}

inline std::set<std::string> left_vars(const Rule& rule) {
  std::set<std::string> vars;
  for (const auto& [id, n] : rule.left.nodes())
    for (const auto& [a, t] : n.attrs) t.collect_vars(vars);
  return vars;
}

/// Empty result means the rule is well formed.
inline std::vector<RuleViolation> validate_rule(const Rule& rule) {
  using K = RuleViolation::Kind;
  std::vector<RuleViolation> out;
  if (!same_types(rule.left.types(), rule.interface.types()) ||
      !same_types(rule.left.types(), rule.right.types()))
    out.push_back({K::TypeMismatch, "rule '" + rule.name + "' mixes type graphs"});
  if (!is_morphism(rule.l, rule.interface, rule.left))
    out.push_back({K::NotAMorphism, "rule '" + rule.name + "': l is not a graph morphism K -> L"});
  if (!is_morphism(rule.r, rule.interface, rule.right))
    out.push_back({K::NotAMorphism, "rule '" + rule.name + "': r is not a graph morphism K -> R"});
  if (!rule.l.is_injective()) out.push_back({K::NotMonic, "rule '" + rule.name + "': l is not injective"});
  if (!rule.r.is_injective()) out.push_back({K::NotMonic, "rule '" + rule.name + "': r is not injective"});
  for (const auto& [id, n] : rule.interface.nodes())
    for (const auto& [a, t] : n.attrs)
      if (!t.is_var())
        out.push_back({K::InterfaceNotVars, "rule '" + rule.name + "': interface attribute " + n.type +
                                                "." + a + " is not a variable"});
  const std::set<std::string> bound = left_vars(rule);
  std::set<std::string> reported;
  for (const auto& [id, n] : rule.right.nodes())
    for (const auto& [a, t] : n.attrs) {
      std::set<std::string> used;
      t.collect_vars(used);
      for (const auto& v : used)
        if (!bound.count(v) && reported.insert(v).second)
          out.push_back({K::UnboundVar, "rule '" + rule.name + "': variable '" + v +
                                            "' is used on the right but not bound on the left"});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Matching and application

struct Match {
  std::string rule;
  GraphMorphism morphism;  // L -> G
  Binding binding;
};

/// Structural matches of L in G whose attribute valuations agree with L's
/// terms under one consistent binding.
inline std::vector<Match> find_matches(const Rule& rule, const TypedGraph& host,
                                       bool injective_only = true) {
  require_same_types(rule.left, host, "find_matches");
  std::vector<Match> out;
  BindingPolicy policy;
  for_each_homomorphism(rule.left, host, injective_only, policy, [&](const GraphMorphism& m) {
    out.push_back(Match{rule.name, m, policy.binding});
    return true;
  });
  return out;
}

inline std::optional<GluingViolation> check_gluing(const Rule& rule, const Match& match,
                                                   const TypedGraph& host) {
  auto pc = pushout_complement(rule.interface, rule.left, host, rule.l, match.morphism);
  if (auto* v = std::get_if<GluingViolation>(&pc)) return *v;
  return std::nullopt;
}

/// Result of a direct derivation. Host identifiers of surviving elements are
/// unchanged in `graph`; created elements get fresh identifiers.
struct Application {
  TypedGraph graph;
  GraphMorphism comatch;  // R -> H
};

inline AttrTerm evaluate(const AttrTerm& t, const Binding& b, const std::string& rule_name) {
  return simplify(substitute(t, b), rule_name);
}

inline Application apply_rule_tracked(const Rule& rule, const Match& match, const TypedGraph& host) {
  auto pc = pushout_complement(rule.interface, rule.left, host, rule.l, match.morphism);
  if (auto* v = std::get_if<GluingViolation>(&pc)) throw GluingError(*v);
  auto& comp = std::get<PushoutComplement>(pc);
  PushoutResult po = pushout(rule.interface, comp.graph, rule.right, comp.from_interface, rule.r);
  Application out{std::move(po.graph), std::move(po.from_right)};

  const std::set<std::string> bound = [&] {
    std::set<std::string> s;
    for (const auto& [k, v] : match.binding) s.insert(k);
    return s;
  }();
  const GraphMorphism r_inv = rule.r_inverse();
  for (const auto& [rid, rn] : rule.right.nodes()) {
    NodeId hid = out.comatch.nodes.at(rid);
    for (const auto& [attr, term] : rn.attrs) {
      std::set<std::string> used;
      term.collect_vars(used);
      for (const auto& v : used)
        if (!bound.count(v))
          throw UnboundVar("rule '" + rule.name + "': variable '" + v + "' is not bound by the match");
      // preserved attributes whose term is untouched keep the host value
      if (auto k = r_inv.nodes.find(rid); k != r_inv.nodes.end()) {
        const Node& ln = rule.left.node(rule.l.nodes.at(k->second));
        if (ln.attrs.at(attr) == term) continue;
      }
      out.graph.set_attr(hid, attr, evaluate(term, match.binding, rule.display_name()));
    }
  }
  return out;
}

inline TypedGraph apply_rule(const Rule& rule, const Match& match, const TypedGraph& host) {
  return apply_rule_tracked(rule, match, host).graph;
}

// ---------------------------------------------------------------------------
// Execution

/// 64-bit FNV-1a over a canonical rendering of the graph.
inline std::uint64_t content_hash(const TypedGraph& g) {
  std::ostringstream s;
  for (const auto& [id, n] : g.nodes()) {
    s << 'n' << id.value << ':' << n.type;
    for (const auto& [a, t] : n.attrs) s << ',' << a << '=' << to_string(t);
    s << ';';
  }
  for (const auto& [id, e] : g.edges())
    s << 'e' << id.value << ':' << e.type << ':' << e.source.value << '>' << e.target.value << ';';
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s.str()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct RunOptions {
  bool injective = true;
  /// Graphs with at most this many nodes are stored in full; larger ones only
  /// by content hash.
  std::size_t snapshot_threshold = 256;
};

struct TraceStep {
  std::size_t index = 0;
  std::string rule;            // registry name
  std::string reflected_name;  // name reported by rulename()
  std::map<std::string, std::uint32_t> match;  // L label (or id) -> host node id
  std::optional<TypedGraph> snapshot;
  std::uint64_t hash = 0;
};

struct DerivationTrace {
  enum class Status { StoppedNoMatch, StoppedStepLimit };
  std::optional<TypedGraph> initial_snapshot;
  std::uint64_t initial_hash = 0;
  std::vector<TraceStep> steps;
  Status status = Status::StoppedStepLimit;
  TypedGraph final_graph;
};

inline std::string_view to_string(DerivationTrace::Status s) {
  return s == DerivationTrace::Status::StoppedNoMatch ? "stopped-no-match" : "stopped-step-limit";
}

/// Valid (rule, match) pairs in rule order, then match order.
inline std::vector<std::pair<const Rule*, Match>> valid_pairs(const Grammar& g, const TypedGraph& host,
                                                              bool injective) {
  std::vector<std::pair<const Rule*, Match>> out;
  for (const auto& rule : g.rules)
    for (auto& m : find_matches(rule, host, injective))
      if (!check_gluing(rule, m, host)) out.emplace_back(&rule, std::move(m));
  return out;
}

/// Repeats: collect valid pairs, stop when none, otherwise pick one with a
/// seeded mt19937_64 (index = draw mod count) and apply it.
inline DerivationTrace run_grammar(const Grammar& g, std::uint64_t seed, std::size_t max_steps,
                                   const RunOptions& options = {}) {
  DerivationTrace trace;
  TypedGraph current = g.initial;
  auto snapshot = [&](const TypedGraph& x) -> std::optional<TypedGraph> {
    if (x.node_count() <= options.snapshot_threshold) return x;
    return std::nullopt;
  };
  trace.initial_snapshot = snapshot(current);
  trace.initial_hash = content_hash(current);
  std::mt19937_64 rng(seed);
  for (std::size_t step = 0;; ++step) {
    if (step >= max_steps) {
      trace.status = DerivationTrace::Status::StoppedStepLimit;
      break;
    }
    auto pairs = valid_pairs(g, current, options.injective);
    if (pairs.empty()) {
      trace.status = DerivationTrace::Status::StoppedNoMatch;
      break;
    }
    const auto& [rule, match] = pairs[rng() % pairs.size()];
    current = apply_rule(*rule, match, current);
    TraceStep ts;
    ts.index = step + 1;
    ts.rule = rule->name;
    ts.reflected_name = rule->display_name();
    for (const auto& [l, h] : match.morphism.nodes) {
      const std::string& label = rule->left.node(l).label;
      ts.match[label.empty() ? "#" + std::to_string(l.value) : label] = h.value;
    }
    ts.snapshot = snapshot(current);
    ts.hash = content_hash(current);
    trace.steps.push_back(std::move(ts));
  }
  trace.final_graph = current;
  return trace;
}

// ---------------------------------------------------------------------------
// Parallel independence (operational ground truth)

namespace detail {

/// Re-checks a match carried over unchanged identifiers into `host`.
inline std::optional<Match> track_match(const Rule& rule, const Match& m, const TypedGraph& host) {
  for (const auto& [a, b] : m.morphism.nodes)
    if (!host.has_node(b)) return std::nullopt;
  for (const auto& [a, b] : m.morphism.edges)
    if (!host.has_edge(b)) return std::nullopt;
  BindingPolicy policy;
  for (const auto& [a, b] : m.morphism.nodes)
    if (!policy.accept(rule.left.node(a), host.node(b))) return std::nullopt;
  Match out{rule.name, m.morphism, policy.binding};
  if (check_gluing(rule, out, host)) return std::nullopt;
  return out;
}

}  // namespace detail

/// Two valid applications at `host` are parallel independent when each match
/// survives the other application and both orders end in isomorphic graphs.
inline bool parallel_independent(const TypedGraph& host, const Rule& r1, const Match& m1,
                                 const Rule& r2, const Match& m2) {
  TypedGraph h1 = apply_rule(r1, m1, host);
  TypedGraph h2 = apply_rule(r2, m2, host);
  auto m2_after = detail::track_match(r2, m2, h1);
  auto m1_after = detail::track_match(r1, m1, h2);
  if (!m2_after || !m1_after) return false;
  return is_isomorphic(apply_rule(r2, *m2_after, h1), apply_rule(r1, *m1_after, h2));
}

}  // namespace aogg
