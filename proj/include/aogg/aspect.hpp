#pragma once

// Aspect-oriented layer: rule morphisms, advices (second-order rules) and
// weaving by componentwise double-pushout rewriting of rules.

#include "aogg/rewrite.hpp"

namespace aogg {

struct IllFormedResult : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Triple of graph morphisms between the L, K and R components of two rules.
struct RuleMorphism {
  GraphMorphism left, interface, right;
  /// Variables of the source rule bound to terms of the target rule.
  Binding binding;

  bool is_injective() const {
    return left.is_injective() && interface.is_injective() && right.is_injective();
  }
};

/// Both inner squares commute and every component is a graph morphism.
inline bool is_rule_morphism(const RuleMorphism& f, const Rule& from, const Rule& to) {
  if (!is_morphism(f.left, from.left, to.left) || !is_morphism(f.interface, from.interface, to.interface) ||
      !is_morphism(f.right, from.right, to.right))
    return false;
  return f.left.after(from.l) == to.l.after(f.interface) &&
         f.right.after(from.r) == to.r.after(f.interface);
}

/// Graph advice p <- i -> e: a span of injective rule morphisms.
struct Advice {
  std::string name;
  Rule pointcut, interface, effect;
  RuleMorphism to_pointcut;  // i -> p
  RuleMorphism to_effect;    // i -> e
};

inline std::vector<std::string> validate_advice(const Advice& a) {
  std::vector<std::string> out;
  for (const Rule* r : {&a.pointcut, &a.interface, &a.effect})
    for (const auto& v : validate_rule(*r)) out.push_back("advice '" + a.name + "': " + v.message);
  if (!is_rule_morphism(a.to_pointcut, a.interface, a.pointcut))
    out.push_back("advice '" + a.name + "': interface -> pointcut is not a rule morphism");
  else if (!a.to_pointcut.is_injective())
    out.push_back("advice '" + a.name + "': interface -> pointcut is not injective");
  if (!is_rule_morphism(a.to_effect, a.interface, a.effect))
    out.push_back("advice '" + a.name + "': interface -> effect is not a rule morphism");
  else if (!a.to_effect.is_injective())
    out.push_back("advice '" + a.name + "': interface -> effect is not injective");
  return out;
}

inline Advice widened(const Advice& a, const TypeGraphPtr& wider) {
  Advice out = a;
  out.pointcut = widened(a.pointcut, wider);
  out.interface = widened(a.interface, wider);
  out.effect = widened(a.effect, wider);
  return out;
}

/// Additions an aspect makes to the initial graph. New edges may attach to
/// existing nodes, referenced by label.
struct InitialExtension {
  struct NewEdge {
    std::string label, type, source, target;  // endpoints are node labels
  };
  std::vector<Node> nodes;  // identifiers are ignored
  std::vector<NewEdge> edges;
};

struct Aspect {
  std::string name;
  TypeGraph added_types;
  InitialExtension added_initial;
  std::vector<Advice> advices;
};

struct AOGG {
  Grammar base;
  std::vector<Aspect> aspects;

  const Aspect* find_aspect(std::string_view name) const {
    for (const auto& a : aspects)
      if (a.name == name) return &a;
    return nullptr;
  }
};

struct ExtendedGraph {
  TypedGraph graph;
  GraphMorphism inclusion;  // G0 -> G'
};

inline ExtendedGraph extend_initial(const TypedGraph& g, const TypeGraphPtr& wider,
                                    const InitialExtension& ext) {
  ExtendedGraph out{g.widened(wider), GraphMorphism::identity(g)};
  for (const auto& n : ext.nodes) {
    if (!n.label.empty() && out.graph.node_by_label(n.label))
      throw TypingError("initial extension redefines node '" + n.label + "'");
    out.graph.add_node(n.type, n.attrs, n.label);
  }
  for (const auto& e : ext.edges) {
    auto s = out.graph.node_by_label(e.source);
    auto t = out.graph.node_by_label(e.target);
    if (!s || !t)
      throw TypingError("initial extension edge '" + e.label + "' references an unknown node");
    out.graph.add_edge(e.type, *s, *t, e.label);
  }
  return out;
}

/// Type graph of `base` extended by the aspect's declarations.
inline TypeGraphPtr extend_types(const TypeGraph& base, const Aspect& a) {
  return std::make_shared<TypeGraph>(base.merged_with(a.added_types));
}

// ---------------------------------------------------------------------------
// Advice matching

/// All componentwise-injective rule morphisms pointcut -> rule, sharing one
/// attribute binding across the three components.
inline std::vector<RuleMorphism> find_advice_matches(const Advice& advice, const Rule& rule) {
  const Rule& p = advice.pointcut;
  require_same_types(p.left, rule.left, "find_advice_matches");
  std::vector<RuleMorphism> out;
  const GraphMorphism rule_l_inv = rule.l_inverse();
  BindingPolicy left_policy;
  for_each_homomorphism(p.left, rule.left, true, left_policy, [&](const GraphMorphism& f_left) {
    GraphMorphism f_k;
    for (const auto& [k, n] : p.interface.nodes()) {
      auto it = rule_l_inv.nodes.find(f_left.nodes.at(p.l.nodes.at(k)));
      if (it == rule_l_inv.nodes.end()) return true;
      f_k.nodes[k] = it->second;
    }
    for (const auto& [k, e] : p.interface.edges()) {
      auto it = rule_l_inv.edges.find(f_left.edges.at(p.l.edges.at(k)));
      if (it == rule_l_inv.edges.end()) return true;
      f_k.edges[k] = it->second;
    }
    BindingPolicy k_policy{left_policy.binding, {}, {}};
    for (const auto& [k, v] : f_k.nodes)
      if (!k_policy.accept(p.interface.node(k), rule.interface.node(v))) return true;

    GraphMorphism seed;
    for (const auto& [k, v] : f_k.nodes) seed.nodes[p.r.nodes.at(k)] = rule.r.nodes.at(v);
    for (const auto& [k, v] : f_k.edges) seed.edges[p.r.edges.at(k)] = rule.r.edges.at(v);
    BindingPolicy right_policy{k_policy.binding, {}, {}};
    for_each_homomorphism(
        p.right, rule.right, true, right_policy,
        [&](const GraphMorphism& f_right) {
          out.push_back(RuleMorphism{f_left, f_k, f_right, right_policy.binding});
          return true;
        },
        &seed);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Advice application

namespace detail {

inline std::set<std::string> rule_vars(const Rule& r) {
  std::set<std::string> vars;
  for (const TypedGraph* g : {&r.left, &r.interface, &r.right})
    for (const auto& [id, n] : g->nodes())
      for (const auto& [a, t] : n.attrs) t.collect_vars(vars);
  return vars;
}

struct ComponentRewrite {
  PushoutComplement complement;
  PushoutResult result;
};

inline ComponentRewrite rewrite_component(const std::string& what, const TypedGraph& i,
                                          const TypedGraph& p, const TypedGraph& e,
                                          const TypedGraph& host, const GraphMorphism& i_to_p,
                                          const GraphMorphism& i_to_e, const GraphMorphism& match) {
  auto pc = pushout_complement(i, p, host, i_to_p, match);
  if (auto* v = std::get_if<GluingViolation>(&pc)) {
    GluingViolation tagged = *v;
    for (auto& el : tagged.elements) el = what + " " + el;
    throw GluingError(tagged);
  }
  auto& comp = std::get<PushoutComplement>(pc);
  PushoutResult po = pushout(i, comp.graph, e, comp.from_interface, i_to_e);
  return {std::move(comp), std::move(po)};
}

/// Span morphism of the rewritten rule, induced from the host span on
/// elements kept from the rule and from the effect span on the rest.
inline GraphMorphism induced_span(const std::string& rule_name, const ComponentRewrite& k,
                                  const ComponentRewrite& side, const GraphMorphism& host_span,
                                  const GraphMorphism& effect_span) {
  GraphMorphism out;
  const GraphMorphism from_d = k.result.from_left.inverse();
  const GraphMorphism from_e = k.result.from_right.inverse();
  for (const auto& [y, n] : k.result.graph.nodes()) {
    if (auto d = from_d.nodes.find(y); d != from_d.nodes.end()) {
      NodeId w = host_span.nodes.at(d->second);
      if (!side.complement.graph.has_node(w))
        throw IllFormedResult("rule '" + rule_name + "': advice deletes an element the interface keeps");
      out.nodes[y] = side.result.from_left.nodes.at(w);
    } else {
      out.nodes[y] = side.result.from_right.nodes.at(effect_span.nodes.at(from_e.nodes.at(y)));
    }
  }
  for (const auto& [y, e] : k.result.graph.edges()) {
    if (auto d = from_d.edges.find(y); d != from_d.edges.end()) {
      EdgeId w = host_span.edges.at(d->second);
      if (!side.complement.graph.has_edge(w))
        throw IllFormedResult("rule '" + rule_name + "': advice deletes an element the interface keeps");
      out.edges[y] = side.result.from_left.edges.at(w);
    } else {
      out.edges[y] = side.result.from_right.edges.at(effect_span.edges.at(from_e.edges.at(y)));
    }
  }
  return out;
}

/// Writes effect attribute terms into a rewritten component: new elements
/// take the effect's terms, interface elements only where the effect changes
/// the interface term.
inline void transfer_effect_terms(TypedGraph& out, const PushoutResult& po, const TypedGraph& effect,
                                  const TypedGraph& interface, const GraphMorphism& i_to_e,
                                  const Binding& sigma) {
  const GraphMorphism e_to_i = i_to_e.inverse();
  for (const auto& [v, n] : effect.nodes()) {
    NodeId h = po.from_right.nodes.at(v);
    auto from_i = e_to_i.nodes.find(v);
    for (const auto& [attr, term] : n.attrs) {
      if (from_i != e_to_i.nodes.end() && interface.node(from_i->second).attrs.at(attr) == term) continue;
      out.set_attr(h, attr, substitute(term, sigma));
    }
  }
}

}  // namespace detail

/// Second-order DPO step: rewrites `rule` with `advice` at `match`
/// (pointcut -> rule). The result keeps the rule's name; callers rename.
inline Rule apply_advice(const Advice& advice, const RuleMorphism& match, const Rule& rule) {
  const Rule& i = advice.interface;
  const Rule& p = advice.pointcut;
  const Rule& e = advice.effect;
  auto left = detail::rewrite_component("L", i.left, p.left, e.left, rule.left, advice.to_pointcut.left,
                                        advice.to_effect.left, match.left);
  auto mid = detail::rewrite_component("K", i.interface, p.interface, e.interface, rule.interface,
                                       advice.to_pointcut.interface, advice.to_effect.interface,
                                       match.interface);
  auto right = detail::rewrite_component("R", i.right, p.right, e.right, rule.right,
                                         advice.to_pointcut.right, advice.to_effect.right, match.right);

  // effect-only variables are renamed away from the rule's variables
  Binding sigma = match.binding;
  std::set<std::string> taken = detail::rule_vars(rule);
  std::set<std::string> effect_vars;
  for (const TypedGraph* g : {&e.left, &e.right})
    for (const auto& [id, n] : g->nodes())
      for (const auto& [a, t] : n.attrs) t.collect_vars(effect_vars);
  for (const auto& v : effect_vars) taken.insert(v);
  for (const auto& v : effect_vars) {
    if (sigma.count(v)) continue;
    if (!detail::rule_vars(rule).count(v)) {
      sigma.emplace(v, AttrTerm::var(v));
      continue;
    }
    std::string fresh;
    for (int k = 1;; ++k) {
      fresh = v + "_" + std::to_string(k);
      if (!taken.count(fresh)) break;
    }
    taken.insert(fresh);
    sigma.emplace(v, AttrTerm::var(fresh));
  }

  Rule out;
  out.name = rule.name;
  out.reflected_name = rule.display_name();
  out.left = left.result.graph;
  out.interface = mid.result.graph;
  out.right = right.result.graph;
  detail::transfer_effect_terms(out.left, left.result, e.left, i.left, advice.to_effect.left, sigma);
  detail::transfer_effect_terms(out.right, right.result, e.right, i.right, advice.to_effect.right, sigma);
  out.l = detail::induced_span(rule.name, mid, left, rule.l, e.l);
  out.r = detail::induced_span(rule.name, mid, right, rule.r, e.r);

  auto problems = validate_rule(out);
  if (!problems.empty()) {
    std::string msg = "advice '" + advice.name + "' on rule '" + rule.name + "' yields an ill-formed rule:";
    for (const auto& pr : problems) msg += " " + pr.message + ";";
    throw IllFormedResult(msg);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Weaving

inline std::string woven_name(const std::string& rule, const std::string& advice, std::size_t k) {
  return rule + "@" + advice + "#" + std::to_string(k);
}

/// One weaving step. Unmatched rules are kept; each matched rule is replaced by
/// one rewritten rule per (advice, match) pair. Rewritten rules are not
/// matched again.
inline Grammar weave_aspect(const Grammar& g, const Aspect& a) {
  Grammar out;
  out.types = extend_types(*g.types, a);
  out.initial = extend_initial(g.initial, out.types, a.added_initial).graph;
  std::vector<Advice> advices;
  for (const auto& adv : a.advices) advices.push_back(widened(adv, out.types));
  for (const auto& base : g.rules) {
    Rule rule = widened(base, out.types);
    std::vector<Rule> variants;
    for (const auto& adv : advices) {
      auto matches = find_advice_matches(adv, rule);
      for (std::size_t k = 0; k < matches.size(); ++k) {
        Rule woven = apply_advice(adv, matches[k], rule);
        woven.name = woven_name(rule.name, adv.name, k);
        variants.push_back(std::move(woven));
      }
    }
    if (variants.empty())
      out.rules.push_back(std::move(rule));
    else
      for (auto& v : variants) out.rules.push_back(std::move(v));
  }
  return out;
}

/// Left fold of weave_aspect over the aspects, in order.
inline Grammar weave_all(const AOGG& d) {
  Grammar g = d.base;
  for (const auto& a : d.aspects) g = weave_aspect(g, a);
  return g;
}

/// The same AOGG with its aspects reordered by name.
inline AOGG reordered(const AOGG& d, const std::vector<std::string>& order) {
  if (order.size() != d.aspects.size())
    throw std::invalid_argument("aspect order must name every aspect exactly once");
  AOGG out{d.base, {}};
  std::set<std::string> seen;
  for (const auto& name : order) {
    const Aspect* a = d.find_aspect(name);
    if (!a || !seen.insert(name).second) throw std::invalid_argument("bad aspect in order: " + name);
    out.aspects.push_back(*a);
  }
  return out;
}

/// Type graph with every aspect's declarations added.
inline TypeGraphPtr woven_types(const AOGG& d) {
  TypeGraph t = *d.base.types;
  for (const auto& a : d.aspects) t = t.merged_with(a.added_types);
  return std::make_shared<TypeGraph>(std::move(t));
}

}  // namespace aogg
