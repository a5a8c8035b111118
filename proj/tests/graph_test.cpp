#include "support.hpp"

#include <gtest/gtest.h>

using namespace aogg;
using namespace testing_support;

namespace {

TypeGraphPtr small_types() {
  auto t = std::make_shared<TypeGraph>();
  t->add_node_type(NodeType{"A", {AttrDecl{"n", Sort::Int}}});
  t->add_node_type(NodeType{"B", {}});
  t->add_edge_type(EdgeType{"e", "A", "B"});
  t->add_edge_type(EdgeType{"f", "A", "A"});
  return t;
}

AttrTerm random_term(Rng& rng, int depth) {
  switch (rng.uniform(0, depth > 0 ? 5 : 3)) {
    case 0: return AttrTerm::lit(rng.uniform(-50, 50));
    case 1: return AttrTerm::lit(std::string(rng.coin() ? "q\"x\\" : "plain\nline"));
    case 2: return rng.coin() ? AttrTerm::lit(true) : AttrTerm::var("v" + std::to_string(rng.uniform(0, 3)));
    case 3: return AttrTerm::rule_name();
    default: {
      std::vector<AttrTerm> parts;
      for (int i = rng.uniform(0, 3); i > 0; --i) parts.push_back(random_term(rng, depth - 1));
      return AttrTerm::concat(std::move(parts));
    }
  }
}

}  // namespace

TEST(AttrTerm, PrintsAndParsesCanonically) {
  EXPECT_EQ(to_string(parse_term("concat( a ,\"b\", rulename())")), "concat(a, \"b\", rulename())");
  EXPECT_EQ(parse_term("-12"), AttrTerm::lit(-12));
  EXPECT_EQ(parse_term("false"), AttrTerm::lit(false));
  EXPECT_THROW(parse_term("concat(a"), TermSyntaxError);
  EXPECT_THROW(parse_term("max(a)"), TermSyntaxError);
  EXPECT_THROW(parse_term("\"open"), TermSyntaxError);
}

TEST(AttrTerm, RoundTripProperty) {
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    AttrTerm t = random_term(rng, 3);
    EXPECT_EQ(parse_term(to_string(t)), t) << to_string(t);
  }
}

TEST(AttrTerm, MatchingBindsAndChecksConsistency) {
  Binding b;
  std::vector<std::string> trail;
  EXPECT_TRUE(match_term(AttrTerm::var("x"), AttrTerm::lit(3), b, trail));
  EXPECT_TRUE(match_term(AttrTerm::var("x"), AttrTerm::lit(3), b, trail));
  EXPECT_FALSE(match_term(AttrTerm::var("x"), AttrTerm::lit(4), b, trail));
  EXPECT_FALSE(match_term(AttrTerm::lit("a"), AttrTerm::lit("b"), b, trail));
  EXPECT_EQ(b.size(), 1u);
  EXPECT_EQ(simplify(AttrTerm::concat({AttrTerm::lit("a"), AttrTerm::rule_name()}), std::string("R")),
            AttrTerm::lit("aR"));
}

TEST(TypedGraph, RejectsIllTypedElements) {
  TypedGraph g(small_types());
  EXPECT_THROW(g.add_node("C"), TypingError);
  EXPECT_THROW(g.add_node("A"), TypingError);                                // missing attribute
  EXPECT_THROW(g.add_node("A", {{"n", AttrTerm::lit("x")}}), TypingError);  // wrong sort
  NodeId a = g.add_node("A", {{"n", AttrTerm::lit(1)}});
  NodeId b = g.add_node("B");
  EXPECT_THROW(g.add_edge("e", b, a), TypingError);
  EXPECT_THROW(g.add_edge("zz", a, b), TypingError);
  EdgeId e = g.add_edge("e", a, b);
  EXPECT_THROW(g.remove_node(a), std::exception);
  g.remove_edge(e);
  g.remove_node(a);
  EXPECT_EQ(g.add_node("B").value, 2u);  // identifiers are never reused
}

TEST(TypeGraph, MergeAcceptsIdenticalAndRejectsConflicting) {
  TypeGraph a = *small_types();
  TypeGraph b;
  b.add_node_type(NodeType{"A", {AttrDecl{"n", Sort::Int}}});
  b.add_node_type(NodeType{"C", {}});
  b.add_edge_type(EdgeType{"g", "A", "C"});
  TypeGraph m = a.merged_with(b);
  EXPECT_TRUE(m.includes(a));
  EXPECT_TRUE(m.includes(b));
  TypeGraph c;
  c.add_node_type(NodeType{"A", {}});
  EXPECT_THROW(a.merged_with(c), TypingError);
}

TEST(Homomorphisms, MatchBruteForceOracle) {
  Rng rng(11);
  for (int i = 0; i < 150; ++i) {
    auto t = std::make_shared<TypeGraph>(random_type_graph(rng, 3, 3, false));
    TypedGraph a = random_graph(rng, t, 3, 3);
    TypedGraph b = random_graph(rng, t, 4, 5);
    for (bool inj : {true, false})
      ASSERT_EQ(find_homomorphisms(a, b, inj).size(), brute_hom_count(a, b, inj)) << "case " << i << " inj " << inj;
  }
}

TEST(Homomorphisms, AreValidMorphismsInAscendingOrder) {
  Rng rng(12);
  auto t = std::make_shared<TypeGraph>(random_type_graph(rng, 2, 2, false));
  TypedGraph a = random_graph(rng, t, 2, 2);
  TypedGraph b = random_graph(rng, t, 4, 6);
  auto first = find_homomorphisms(a, b, true);
  auto second = find_homomorphisms(a, b, true);
  EXPECT_EQ(first, second);
  for (const auto& m : first) {
    EXPECT_TRUE(is_morphism(m, a, b));
    EXPECT_TRUE(m.is_injective());
  }
}

TEST(Homomorphisms, SeedIsRespected) {
  auto t = small_types();
  TypedGraph pat(t), host(t);
  NodeId p = pat.add_node("A", {{"n", AttrTerm::var("x")}});
  NodeId h1 = host.add_node("A", {{"n", AttrTerm::lit(1)}});
  host.add_node("A", {{"n", AttrTerm::lit(2)}});
  GraphMorphism seed;
  seed.nodes[p] = h1;
  BindingPolicy policy;
  std::vector<GraphMorphism> found;
  for_each_homomorphism(pat, host, true, policy, [&](const GraphMorphism& m) {
    found.push_back(m);
    return true;
  }, &seed);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0](p), h1);
}

TEST(Pushout, GluesAlongInterface) {
  auto t = small_types();
  TypedGraph k(t), d(t), r(t);
  NodeId kb = k.add_node("B");
  NodeId db = d.add_node("B");
  d.add_node("B");
  NodeId rb = r.add_node("B");
  NodeId ra = r.add_node("A", {{"n", AttrTerm::lit(5)}});
  r.add_edge("e", ra, rb);
  GraphMorphism left, right;
  left.nodes[kb] = db;
  right.nodes[kb] = rb;
  PushoutResult po = pushout(k, d, r, left, right);
  EXPECT_EQ(po.graph.node_count(), 3u);
  EXPECT_EQ(po.graph.edge_count(), 1u);
  EXPECT_EQ(po.from_left(db), po.from_right(rb));
  EXPECT_TRUE(is_morphism(po.from_left, d, po.graph));
  EXPECT_TRUE(is_morphism(po.from_right, r, po.graph));
}

TEST(Pushout, SizeLawProperty) {
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    auto t = std::make_shared<TypeGraph>(random_type_graph(rng, 3, 3, false));
    Rule r = random_rule(rng, t, 6);
    TypedGraph d = r.left;  // glue R onto L along K
    PushoutResult po = pushout(r.interface, d, r.right, r.l, r.r);
    EXPECT_EQ(po.graph.node_count(), d.node_count() + r.right.node_count() - r.interface.node_count());
    EXPECT_EQ(po.graph.edge_count(), d.edge_count() + r.right.edge_count() - r.interface.edge_count());
  }
}

TEST(PushoutComplement, ReportsDanglingEdges) {
  Loaded f = load_fixture("gluing_dangling.aogg");
  const Rule& r = f.aogg.base.rules.at(0);
  auto ms = find_matches(r, f.aogg.base.initial, f.config.injective);
  ASSERT_EQ(ms.size(), 1u);
  auto v = check_gluing(r, ms[0], f.aogg.base.initial);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->kind, GluingViolation::Kind::DanglingEdge);
  EXPECT_THROW(apply_rule(r, ms[0], f.aogg.base.initial), GluingError);
}

TEST(PushoutComplement, ReportsIdentificationClash) {
  Loaded f = load_fixture("gluing_identification.aogg");
  ASSERT_FALSE(f.config.injective);
  const Rule& r = f.aogg.base.rules.at(0);
  auto ms = find_matches(r, f.aogg.base.initial, f.config.injective);
  ASSERT_EQ(ms.size(), 1u);
  auto v = check_gluing(r, ms[0], f.aogg.base.initial);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(v->kind, GluingViolation::Kind::IdentificationClash);
}

TEST(Isomorphism, DetectsPermutationsAndRenamings) {
  auto t = small_types();
  TypedGraph a(t), b(t);
  NodeId a1 = a.add_node("A", {{"n", AttrTerm::var("x")}});
  NodeId a2 = a.add_node("B");
  a.add_edge("e", a1, a2);
  NodeId b2 = b.add_node("B");
  NodeId b1 = b.add_node("A", {{"n", AttrTerm::var("y")}});
  b.add_edge("e", b1, b2);
  EXPECT_FALSE(is_isomorphic(a, b));
  EXPECT_TRUE(is_isomorphic(a, b, AttrComparison::Alpha));
  EXPECT_TRUE(is_isomorphic(a, b, AttrComparison::Ignore));
  b.add_edge("f", b1, b1);
  EXPECT_FALSE(is_isomorphic(a, b, AttrComparison::Ignore));
}

TEST(DisjointUnion, AddsSizes) {
  Loaded f = load_fixture();
  const TypedGraph& g = f.aogg.base.initial;
  DisjointUnion u = disjoint_union(g, g);
  EXPECT_EQ(u.graph.node_count(), 2 * g.node_count());
  EXPECT_EQ(u.graph.edge_count(), 2 * g.edge_count());
  EXPECT_TRUE(is_morphism(u.from_first, g, u.graph));
  EXPECT_TRUE(is_morphism(u.from_second, g, u.graph));
}
