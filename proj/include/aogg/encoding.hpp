#pragma once

// Encoding of rules as typed graphs, so that advices become first-order rules
// over an encoded grammar.
//
// For a type graph T the encoding type graph R(T) holds, for each slot
// s in {L, K, R}:
//   node type  s.X          for every node type X of T (attributes copied, sort string)
//   node type  s.e          for every edge type e of T (edges become nodes)
//   edge types s.e.src, s.e.tgt from s.e to the copies of e's endpoints
// plus span edge types K.t.l and K.t.r from every K copy to its L and R copy,
// one identity node type rule.id, and identity edge types s.t.id from every
// copy to rule.id.

#include "aogg/aspect.hpp"

#include <array>

namespace aogg {

struct MalformedEncoding : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Slot { L, K, R, None };
enum class Role { Node, EdgeNode, Source, Target, SpanLeft, SpanRight, Identity, IdentityLink };

inline std::string_view slot_prefix(Slot s) {
  switch (s) {
    case Slot::L: return "L";
    case Slot::K: return "K";
    case Slot::R: return "R";
    case Slot::None: break;
  }
  return "";
}

inline constexpr std::string_view kIdentityType = "rule.id";
inline constexpr std::string_view kNameAttr = "name";
inline constexpr std::string_view kNameVar = "rule.name";

inline std::string copy_type(Slot s, const std::string& t) { return std::string(slot_prefix(s)) + "." + t; }
inline std::string source_type(Slot s, const std::string& e) { return copy_type(s, e) + ".src"; }
inline std::string target_type(Slot s, const std::string& e) { return copy_type(s, e) + ".tgt"; }
inline std::string span_type(const std::string& t, bool left) { return "K." + t + (left ? ".l" : ".r"); }
inline std::string identity_type(Slot s, const std::string& t) { return copy_type(s, t) + ".id"; }

/// R(T). Throws TypingError when T uses '.' in a type name.
inline TypeGraph encode_type_graph(const TypeGraph& t) {
  for (const auto& [name, nt] : t.node_types())
    if (name.find('.') != std::string::npos)
      throw TypingError("type name '" + name + "' cannot be encoded: '.' is reserved");
  for (const auto& [name, et] : t.edge_types())
    if (name.find('.') != std::string::npos)
      throw TypingError("type name '" + name + "' cannot be encoded: '.' is reserved");
  TypeGraph out;
  out.add_node_type(NodeType{std::string(kIdentityType), {AttrDecl{std::string(kNameAttr), Sort::String}}});
  for (Slot s : {Slot::L, Slot::K, Slot::R}) {
    for (const auto& [name, nt] : t.node_types()) {
      NodeType copy{copy_type(s, name), {}};
      for (const auto& a : nt.attrs) copy.attrs.push_back(AttrDecl{a.name, Sort::String});
      out.add_node_type(std::move(copy));
    }
    for (const auto& [name, et] : t.edge_types()) out.add_node_type(NodeType{copy_type(s, name), {}});
  }
  for (Slot s : {Slot::L, Slot::K, Slot::R}) {
    for (const auto& [name, et] : t.edge_types()) {
      out.add_edge_type(EdgeType{source_type(s, name), copy_type(s, name), copy_type(s, et.source)});
      out.add_edge_type(EdgeType{target_type(s, name), copy_type(s, name), copy_type(s, et.target)});
    }
    auto identity_edges = [&](const std::string& name) {
      out.add_edge_type(EdgeType{identity_type(s, name), copy_type(s, name), std::string(kIdentityType)});
    };
    for (const auto& [name, nt] : t.node_types()) identity_edges(name);
    for (const auto& [name, et] : t.edge_types()) identity_edges(name);
  }
  auto spans = [&](const std::string& name) {
    out.add_edge_type(EdgeType{span_type(name, true), copy_type(Slot::K, name), copy_type(Slot::L, name)});
    out.add_edge_type(EdgeType{span_type(name, false), copy_type(Slot::K, name), copy_type(Slot::R, name)});
  };
  for (const auto& [name, nt] : t.node_types()) spans(name);
  for (const auto& [name, et] : t.edge_types()) spans(name);
  return out;
}

/// T + R(T).
inline TypeGraphPtr encoding_types(const TypeGraph& t) {
  return std::make_shared<TypeGraph>(t.merged_with(encode_type_graph(t)));
}

// ---------------------------------------------------------------------------
// Terms

/// How attribute terms are written into encoded copies.
///   Quoted:   a string literal holding the term's text (encoded grammars)
///   Raw:      variables stay variables, for comparison up to renaming
///   Pattern:  text with variables left open, for matching quoted terms
///   Template: like Pattern, but only variables in the bound set stay open
enum class TermMode { Quoted, Raw, Pattern, Template };

inline AttrTerm encode_term(const AttrTerm& t, TermMode mode, const std::set<std::string>& bound = {}) {
  switch (mode) {
    case TermMode::Quoted:
      return AttrTerm::lit(to_string(t));
    case TermMode::Raw:
      if (t.is_var()) return t;
      if (t.is_concat()) {
        std::vector<AttrTerm> parts;
        for (const auto& p : t.parts()) parts.push_back(encode_term(p, mode));
        return AttrTerm::concat(std::move(parts));
      }
      return AttrTerm::lit(to_string(t));
    case TermMode::Pattern:
    case TermMode::Template:
      if (t.is_var())
        return mode == TermMode::Pattern || bound.count(t.var_name()) ? t : AttrTerm::lit(t.var_name());
      if (t.is_concat()) {
        std::vector<AttrTerm> parts{AttrTerm::lit("concat(")};
        for (std::size_t i = 0; i < t.parts().size(); ++i) {
          if (i) parts.push_back(AttrTerm::lit(", "));
          parts.push_back(encode_term(t.parts()[i], mode, bound));
        }
        parts.push_back(AttrTerm::lit(")"));
        return AttrTerm::concat(std::move(parts));
      }
      return AttrTerm::lit(to_string(t));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Rules

struct ProvenanceKey {
  Slot slot;
  Role role;
  bool from_edge;          // the original element is an edge
  std::uint32_t original;  // its identifier in the slot's graph
  auto operator<=>(const ProvenanceKey&) const = default;
};

struct Provenance {
  std::string owner;  // rule name
  ProvenanceKey key;
};

/// Where every encoded element came from.
struct EncodingTrace {
  NodeId identity{0};
  std::map<ProvenanceKey, NodeId> nodes;
  std::map<ProvenanceKey, EdgeId> edges;
  std::map<NodeId, Provenance> node_origin;
  std::map<EdgeId, Provenance> edge_origin;
};

namespace detail {

inline const TypedGraph& slot_graph(const Rule& r, Slot s) {
  return s == Slot::L ? r.left : s == Slot::K ? r.interface : r.right;
}

inline const GraphMorphism& slot_morphism(const RuleMorphism& m, Slot s) {
  return s == Slot::L ? m.left : s == Slot::K ? m.interface : m.right;
}

inline std::string slot_label(Slot s, const std::string& label) {
  return label.empty() ? std::string() : std::string(slot_prefix(s)) + ":" + label;
}

}  // namespace detail

/// Appends S(rule) to `out`, which must be typed over a graph containing
/// R(T). Returns the trace of the encoded elements.
inline EncodingTrace encode_rule_into(TypedGraph& out, const Rule& rule, TermMode mode,
                                      const std::set<std::string>& bound = {}) {
  EncodingTrace tr;
  std::vector<NodeId> members;
  auto note_node = [&](NodeId id, ProvenanceKey k) {
    tr.nodes[k] = id;
    tr.node_origin[id] = Provenance{rule.name, k};
  };
  auto note_edge = [&](EdgeId id, ProvenanceKey k) {
    tr.edges[k] = id;
    tr.edge_origin[id] = Provenance{rule.name, k};
  };
  const std::array<Slot, 3> slots{Slot::L, Slot::K, Slot::R};
  for (Slot s : slots) {
    const TypedGraph& g = detail::slot_graph(rule, s);
    for (const auto& [id, n] : g.nodes()) {
      std::map<std::string, AttrTerm> attrs;
      for (const auto& [a, t] : n.attrs) attrs.emplace(a, encode_term(t, mode, bound));
      NodeId e = out.add_node(copy_type(s, n.type), std::move(attrs), detail::slot_label(s, n.label));
      note_node(e, {s, Role::Node, false, id.value});
      members.push_back(e);
    }
    for (const auto& [id, ed] : g.edges()) {
      NodeId e = out.add_node(copy_type(s, ed.type), {}, detail::slot_label(s, ed.label));
      note_node(e, {s, Role::EdgeNode, true, id.value});
      members.push_back(e);
      note_edge(out.add_edge(source_type(s, ed.type), e, tr.nodes.at({s, Role::Node, false, ed.source.value})),
                {s, Role::Source, true, id.value});
      note_edge(out.add_edge(target_type(s, ed.type), e, tr.nodes.at({s, Role::Node, false, ed.target.value})),
                {s, Role::Target, true, id.value});
    }
  }
  for (const auto& [id, n] : rule.interface.nodes()) {
    NodeId k = tr.nodes.at({Slot::K, Role::Node, false, id.value});
    note_edge(out.add_edge(span_type(n.type, true), k, tr.nodes.at({Slot::L, Role::Node, false, rule.l(id).value})),
              {Slot::K, Role::SpanLeft, false, id.value});
    note_edge(out.add_edge(span_type(n.type, false), k, tr.nodes.at({Slot::R, Role::Node, false, rule.r(id).value})),
              {Slot::K, Role::SpanRight, false, id.value});
  }
  for (const auto& [id, e] : rule.interface.edges()) {
    NodeId k = tr.nodes.at({Slot::K, Role::EdgeNode, true, id.value});
    note_edge(out.add_edge(span_type(e.type, true), k, tr.nodes.at({Slot::L, Role::EdgeNode, true, rule.l(id).value})),
              {Slot::K, Role::SpanLeft, true, id.value});
    note_edge(out.add_edge(span_type(e.type, false), k, tr.nodes.at({Slot::R, Role::EdgeNode, true, rule.r(id).value})),
              {Slot::K, Role::SpanRight, true, id.value});
  }
  AttrTerm name = mode == TermMode::Quoted ? AttrTerm::lit(rule.display_name()) : AttrTerm::var(std::string(kNameVar));
  tr.identity = out.add_node(std::string(kIdentityType), {{std::string(kNameAttr), name}}, "rule:" + rule.name);
  note_node(tr.identity, {Slot::None, Role::Identity, false, 0});
  for (NodeId m : members) {
    const Provenance& p = tr.node_origin.at(m);
    const std::string base = out.node(m).type.substr(2);
    note_edge(out.add_edge(identity_type(p.key.slot, base), m, tr.identity),
              {p.key.slot, Role::IdentityLink, p.key.from_edge, p.key.original});
  }
  return tr;
}

/// S(rule) as a standalone graph over T + R(T).
inline TypedGraph encode_rule(const Rule& rule, TermMode mode = TermMode::Quoted, EncodingTrace* trace = nullptr,
                              const std::set<std::string>& bound = {}) {
  TypedGraph out(encoding_types(*rule.left.types()));
  EncodingTrace tr = encode_rule_into(out, rule, mode, bound);
  if (trace) *trace = std::move(tr);
  return out;
}

/// Maps every element of an encoded source rule to the encoded target rule
/// along a rule morphism.
inline GraphMorphism encode_morphism(const RuleMorphism& m, const EncodingTrace& from, const EncodingTrace& to) {
  GraphMorphism out;
  auto image = [&](const ProvenanceKey& k) {
    if (k.role == Role::Identity) return k;
    const GraphMorphism& f = detail::slot_morphism(m, k.slot);
    std::uint32_t v = k.from_edge ? f.edges.at(EdgeId(k.original)).value : f.nodes.at(NodeId(k.original)).value;
    return ProvenanceKey{k.slot, k.role, k.from_edge, v};
  };
  for (const auto& [k, id] : from.nodes) out.nodes[id] = to.nodes.at(image(k));
  for (const auto& [k, id] : from.edges) out.edges[id] = to.edges.at(image(k));
  return out;
}

// ---------------------------------------------------------------------------
// Grammars

struct EncodedGrammar {
  TypeGraphPtr types;  // T + R(T)
  TypedGraph graph;    // G + encodings of all rules
  std::map<std::string, EncodingTrace> traces;  // by rule name
};

/// |G|: the initial graph plus the quoted encoding of every rule.
inline EncodedGrammar encode_grammar(const Grammar& g) {
  EncodedGrammar out;
  out.types = encoding_types(*g.types);
  out.graph = g.initial.widened(out.types);
  for (const auto& r : g.rules) out.traces[r.name] = encode_rule_into(out.graph, widened(r, out.types), TermMode::Quoted);
  return out;
}

inline std::set<std::string> pointcut_vars(const Advice& a) {
  std::set<std::string> vars = detail::rule_vars(a.pointcut);
  vars.insert(std::string(kNameVar));
  return vars;
}

/// |a| = S(p) <- S(i) -> S(e) over `types`, which must contain R(T).
inline Rule encode_advice(const Advice& advice, const TypeGraphPtr& types, const std::string& name,
                          EncodingTrace* pointcut_trace = nullptr) {
  const auto bound = pointcut_vars(advice);
  Rule out;
  out.name = name;
  out.reflected_name = name;
  out.left = TypedGraph(types);
  out.interface = TypedGraph(types);
  out.right = TypedGraph(types);
  EncodingTrace tp = encode_rule_into(out.left, widened(advice.pointcut, types), TermMode::Pattern);
  EncodingTrace ti = encode_rule_into(out.interface, widened(advice.interface, types), TermMode::Pattern);
  EncodingTrace te = encode_rule_into(out.right, widened(advice.effect, types), TermMode::Template, bound);
  for (const auto& [id, n] : out.interface.nodes())
    for (const auto& [a, t] : n.attrs) out.interface.set_attr(id, a, interface_term(a));
  out.l = encode_morphism(advice.to_pointcut, ti, tp);
  out.r = encode_morphism(advice.to_effect, ti, te);
  if (pointcut_trace) *pointcut_trace = tp;
  auto problems = validate_rule(out);
  if (!problems.empty()) throw MalformedEncoding("encoded advice '" + name + "': " + problems.front().message);
  return out;
}

/// Type graph and initial graph of the AOGG with every aspect's declarations
/// added, without weaving any advice.
inline Grammar extended_base(const AOGG& d) {
  Grammar g = d.base;
  for (const auto& a : d.aspects) {
    g.types = extend_types(*g.types, a);
    g.initial = extend_initial(g.initial, g.types, a.added_initial).graph;
  }
  for (auto& r : g.rules) r = widened(r, g.types);
  return g;
}

/// The encoded grammar of an AOGG: initial graph G_W + encodings of the base
/// rules, one encoded rule per advice (named aspect.advice).
inline Grammar encode_aogg(const AOGG& d) {
  Grammar base = extended_base(d);
  EncodedGrammar eg = encode_grammar(base);
  Grammar out;
  out.types = eg.types;
  out.initial = std::move(eg.graph);
  for (const auto& a : d.aspects)
    for (const auto& adv : a.advices) out.rules.push_back(encode_advice(adv, out.types, a.name + "." + adv.name));
  return out;
}

// ---------------------------------------------------------------------------
// Decoding

/// The subgraph encoding the rule whose identity node is `identity`.
inline TypedGraph extract_rule_encoding(const TypedGraph& g, NodeId identity) {
  if (!g.has_node(identity) || g.node(identity).type != kIdentityType)
    throw MalformedEncoding("node " + std::to_string(identity.value) + " is not a rule identity node");
  std::set<NodeId> keep{identity};
  for (const auto& [id, e] : g.edges())
    if (e.target == identity && e.type.size() > 3 && e.type.ends_with(".id")) keep.insert(e.source);
  TypedGraph out(g.types());
  for (NodeId n : keep) out.insert_node(g.node(n));
  for (const auto& [id, e] : g.edges())
    if (keep.count(e.source) && keep.count(e.target)) out.insert_edge(e);
  return out;
}

inline std::vector<NodeId> identity_nodes(const TypedGraph& g) {
  std::vector<NodeId> out;
  for (const auto& [id, n] : g.nodes())
    if (n.type == kIdentityType) out.push_back(id);
  return out;
}

namespace detail {

inline std::pair<Slot, std::string> split_copy(const std::string& type) {
  if (type.size() > 2 && type[1] == '.') {
    switch (type[0]) {
      case 'L': return {Slot::L, type.substr(2)};
      case 'K': return {Slot::K, type.substr(2)};
      case 'R': return {Slot::R, type.substr(2)};
    }
  }
  return {Slot::None, type};
}

inline std::string strip_slot_label(const std::string& label) {
  return label.size() > 2 && label[1] == ':' ? label.substr(2) : label;
}

}  // namespace detail

/// Inverse of the quoted encoding: rebuilds a rule over `base` from its
/// encoding (as produced by extract_rule_encoding).
inline Rule decode_rule(const TypedGraph& enc, const TypeGraphPtr& base) {
  std::optional<NodeId> identity;
  for (const auto& [id, n] : enc.nodes())
    if (n.type == kIdentityType) {
      if (identity) throw MalformedEncoding("more than one identity node");
      identity = id;
    }
  if (!identity) throw MalformedEncoding("no identity node");
  const AttrTerm& name_term = enc.node(*identity).attrs.at(std::string(kNameAttr));
  if (!name_term.is_string_literal()) throw MalformedEncoding("rule name is not a literal");

  Rule rule;
  rule.name = name_term.string_value();
  rule.reflected_name = rule.name;
  rule.left = TypedGraph(base);
  rule.interface = TypedGraph(base);
  rule.right = TypedGraph(base);
  auto graph_of = [&](Slot s) -> TypedGraph& {
    return s == Slot::L ? rule.left : s == Slot::K ? rule.interface : rule.right;
  };

  // outgoing edges of each encoded node, by type
  std::map<NodeId, std::map<std::string, std::vector<NodeId>>> out_edges;
  for (const auto& [id, e] : enc.edges()) out_edges[e.source][e.type].push_back(e.target);
  auto unique_target = [&](NodeId from, const std::string& type) {
    auto it = out_edges.find(from);
    if (it == out_edges.end() || !it->second.count(type) || it->second.at(type).size() != 1)
      throw MalformedEncoding("encoded element " + std::to_string(from.value) + " needs exactly one '" + type +
                              "' edge");
    return it->second.at(type).front();
  };

  std::map<NodeId, NodeId> node_of;  // encoded element node -> decoded node
  std::map<NodeId, EdgeId> edge_of;  // encoded edge-node -> decoded edge
  for (const auto& [id, n] : enc.nodes()) {
    auto [slot, t] = detail::split_copy(n.type);
    if (slot == Slot::None || !base->find_node_type(t)) continue;
    std::map<std::string, AttrTerm> attrs;
    for (const auto& [a, term] : n.attrs) {
      if (!term.is_string_literal()) throw MalformedEncoding("attribute " + n.type + "." + a + " is not quoted");
      try {
        attrs.emplace(a, parse_term(term.string_value()));
      } catch (const TermSyntaxError& e) {
        throw MalformedEncoding("attribute " + n.type + "." + a + ": " + e.what());
      }
    }
    try {
      node_of[id] = graph_of(slot).add_node(t, std::move(attrs), detail::strip_slot_label(n.label));
    } catch (const TypingError& e) {
      throw MalformedEncoding(e.what());
    }
    unique_target(id, identity_type(slot, t));
  }
  for (const auto& [id, n] : enc.nodes()) {
    auto [slot, t] = detail::split_copy(n.type);
    if (slot == Slot::None || !base->find_edge_type(t)) continue;
    NodeId s = unique_target(id, source_type(slot, t));
    NodeId g = unique_target(id, target_type(slot, t));
    if (!node_of.count(s) || !node_of.count(g)) throw MalformedEncoding("edge endpoint is not an encoded node");
    edge_of[id] = graph_of(slot).add_edge(t, node_of.at(s), node_of.at(g), detail::strip_slot_label(n.label));
    unique_target(id, identity_type(slot, t));
  }
  for (const auto& [id, n] : enc.nodes()) {
    auto [slot, t] = detail::split_copy(n.type);
    if (slot != Slot::K) continue;
    NodeId lt = unique_target(id, span_type(t, true));
    NodeId rt = unique_target(id, span_type(t, false));
    if (node_of.count(id)) {
      rule.l.nodes[node_of.at(id)] = node_of.at(lt);
      rule.r.nodes[node_of.at(id)] = node_of.at(rt);
    } else if (edge_of.count(id)) {
      rule.l.edges[edge_of.at(id)] = edge_of.at(lt);
      rule.r.edges[edge_of.at(id)] = edge_of.at(rt);
    }
  }
  auto problems = validate_rule(rule);
  for (const auto& p : problems)
    if (p.kind == RuleViolation::Kind::NotAMorphism || p.kind == RuleViolation::Kind::NotMonic)
      throw MalformedEncoding(p.message);
  return rule;
}

/// Splits an encoded grammar into its plain graph part and decoded rules,
/// ordered by identity node.
inline Grammar decode_grammar(const TypedGraph& enc, const TypeGraphPtr& base) {
  Grammar out;
  out.types = base;
  out.initial = TypedGraph(base);
  for (const auto& [id, n] : enc.nodes())
    if (base->find_node_type(n.type)) out.initial.insert_node(n);
  for (const auto& [id, e] : enc.edges())
    if (base->find_edge_type(e.type)) out.initial.insert_edge(e);
  for (NodeId id : identity_nodes(enc)) out.rules.push_back(decode_rule(extract_rule_encoding(enc, id), base));
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism of rules and grammars

/// Rules are isomorphic when their encodings are, up to variable renaming.
/// Names are ignored.
inline bool rules_isomorphic(const Rule& a, const Rule& b) {
  if (!(*a.left.types() == *b.left.types())) return false;
  TypeGraphPtr t = encoding_types(*a.left.types());
  TypedGraph ea(t), eb(t);
  encode_rule_into(ea, widened(a, t), TermMode::Raw);
  encode_rule_into(eb, widened(b, t), TermMode::Raw);
  return is_isomorphic(ea, eb, AttrComparison::Alpha);
}

/// Equal type graphs, isomorphic initial graphs and a bijection between rule
/// sets pairing isomorphic rules.
inline bool grammars_isomorphic(const Grammar& a, const Grammar& b) {
  if (!(*a.types == *b.types) || a.rules.size() != b.rules.size()) return false;
  if (!is_isomorphic(a.initial.widened(a.types), b.initial.widened(a.types))) return false;
  std::vector<bool> used(b.rules.size(), false);
  for (const auto& ra : a.rules) {
    bool found = false;
    for (std::size_t j = 0; j < b.rules.size() && !found; ++j)
      if (!used[j] && rules_isomorphic(ra, b.rules[j])) used[j] = found = true;
    if (!found) return false;
  }
  return true;
}

}  // namespace aogg
