#include "support.hpp"

#include <gtest/gtest.h>

using namespace aogg;
using namespace testing_support;

namespace {

const Advice& advice(const AOGG& d, const std::string& aspect, const std::string& name) {
  for (const auto& a : d.find_aspect(aspect)->advices)
    if (a.name == name) return a;
  throw std::out_of_range(name);
}

std::size_t count_type(const TypedGraph& g, const std::string& type) {
  std::size_t n = 0;
  for (const auto& [id, e] : g.edges()) n += e.type == type;
  for (const auto& [id, x] : g.nodes()) n += x.type == type;
  return n;
}

// Base grammar with one rule, plus whatever aspect text the test supplies.
Loaded with_aspect(const std::string& aspect) {
  return parse_grammar(R"(
grammar Small
types {
  node Item(tag: string)
  node Box
  edge in: Item -> Box
}
initial {
  b: Box
  x: Item(tag = "a")
  x -in-> b
}
rule touch {
  lhs {
    x: Item(tag = t)
    b: Box
    x -in-> b
  }
  rhs {
    x: Item(tag = concat(t, "!"))
    b: Box
    x -in-> b
  }
}
)" + aspect);
}

}  // namespace

TEST(AdviceMatching, ReadPermMatchesOnlySendGet) {
  Loaded f = load_fixture();
  const AOGG& d = f.aogg;
  const Aspect& sec = *d.find_aspect("security");
  TypeGraphPtr t = extend_types(*d.base.types, sec);
  Advice read = widened(advice(d, "security", "readPerm"), t);
  for (const auto& r : d.base.rules) {
    auto ms = find_advice_matches(read, widened(r, t));
    EXPECT_EQ(ms.size(), r.name == "SendGET" ? 1u : 0u) << r.name;
    for (const auto& m : ms) EXPECT_TRUE(is_rule_morphism(m, read.pointcut, widened(r, t)));
  }
}

TEST(AdviceMatching, LogAllMatchesEveryRuleOnce) {
  Loaded f = load_fixture();
  const AOGG& d = f.aogg;
  TypeGraphPtr t = extend_types(*d.base.types, *d.find_aspect("log"));
  Advice log = widened(advice(d, "log", "logAll"), t);
  for (const auto& r : d.base.rules) EXPECT_EQ(find_advice_matches(log, widened(r, t)).size(), 1u) << r.name;
}

TEST(ApplyAdvice, ReadPermAddsLoopToAllComponents) {
  Loaded f = load_fixture();
  AOGG only{f.aogg.base, {*f.aogg.find_aspect("security")}};
  Grammar g = weave_all(only);
  ASSERT_EQ(g.rules.size(), 6u);
  const Rule* send = g.find_rule(woven_name("SendGET", "readPerm", 0));
  ASSERT_NE(send, nullptr);
  EXPECT_EQ(send->display_name(), "SendGET");
  EXPECT_EQ(count_type(send->left, "Read"), 1u);
  EXPECT_EQ(count_type(send->interface, "Read"), 1u);
  EXPECT_EQ(count_type(send->right, "Read"), 1u);
  const Rule* set = g.find_rule(woven_name("SendSET", "writePerm", 0));
  ASSERT_NE(set, nullptr);
  EXPECT_EQ(count_type(set->left, "Write"), 1u);
  EXPECT_EQ(count_type(set->left, "Read"), 0u);
  ASSERT_NE(g.find_rule("ExecuteGET"), nullptr);  // unmatched rules are kept as they are
  EXPECT_TRUE(validate_rule(*send).empty());
}

TEST(ApplyAdvice, LogAllAddsLoggerOnce) {
  Loaded f = load_fixture();
  AOGG only{f.aogg.base, {*f.aogg.find_aspect("log")}};
  Grammar g = weave_all(only);
  ASSERT_EQ(g.rules.size(), 6u);
  for (const auto& r : g.rules) {
    EXPECT_EQ(count_type(r.left, "Logger"), 1u) << r.name;
    EXPECT_EQ(count_type(r.right, "Logger"), 1u) << r.name;
    EXPECT_NE(r.name.find("@logAll#0"), std::string::npos);
  }
}

TEST(Weaving, IsNotReentrant) {
  Loaded f = load_fixture();
  const Aspect log = *f.aogg.find_aspect("log");
  Grammar once = weave_aspect(f.aogg.base, log);
  // weaving the woven rules again would add a second logger; one pass must not
  for (const auto& r : once.rules) EXPECT_EQ(count_type(r.left, "Logger"), 1u);
  EXPECT_EQ(once.initial.node_count(), f.aogg.base.initial.node_count() + 1);
}

TEST(Weaving, EmptyAspectLeavesRulesUnchanged) {
  Loaded f = load_fixture();
  Aspect empty{"nothing", {}, {}, {}};
  Grammar g = weave_aspect(f.aogg.base, empty);
  ASSERT_EQ(g.rules.size(), f.aogg.base.rules.size());
  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    EXPECT_EQ(g.rules[i].name, f.aogg.base.rules[i].name);
    EXPECT_TRUE(rules_isomorphic(g.rules[i], f.aogg.base.rules[i]));
  }
  EXPECT_TRUE(g.initial.same_elements(f.aogg.base.initial));
}

TEST(Weaving, OrdersOfFixtureAspectsAgree) {
  Loaded f = load_fixture();
  Grammar a = weave_all(reordered(f.aogg, {"log", "security"}));
  Grammar b = weave_all(reordered(f.aogg, {"security", "log"}));
  EXPECT_TRUE(grammars_isomorphic(a, b));
  EXPECT_THROW(reordered(f.aogg, {"log"}), std::invalid_argument);
  EXPECT_THROW(reordered(f.aogg, {"log", "log"}), std::invalid_argument);
}

TEST(ApplyAdvice, DanglingComponentRaisesGluingError) {
  Loaded f = with_aspect(R"(
aspect drop {
  advice dropItem {
    pointcut {
      lhs { x: Item(tag = t) }
      rhs { }
    }
    interface {
      lhs { }
      rhs { }
    }
    effect {
      lhs { }
      rhs { }
    }
  }
}
)");
  const Advice& a = f.aogg.aspects.at(0).advices.at(0);
  const Rule& r = f.aogg.base.rules.at(0);
  auto ms = find_advice_matches(a, r);
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_THROW(apply_advice(a, ms[0], r), GluingError);
}

TEST(ApplyAdvice, DeletingKeptElementIsIllFormed) {
  Loaded f = with_aspect(R"(
aspect drop {
  advice dropBox {
    pointcut {
      lhs {
        x: Item(tag = t)
        b: Box
        x -in-> b
      }
      rhs { }
    }
    interface {
      lhs { x: Item(tag = t) }
      rhs { }
    }
    effect {
      lhs { x: Item(tag = t) }
      rhs { }
    }
  }
}
)");
  const Advice& a = f.aogg.aspects.at(0).advices.at(0);
  Rule r = f.aogg.base.rules.at(0);
  auto ms = find_advice_matches(a, r);
  ASSERT_EQ(ms.size(), 1u);
  // the box is kept by the rule but the advice removes it from L only
  EXPECT_THROW(apply_advice(a, ms[0], r), IllFormedResult);
}

TEST(ApplyAdvice, EffectVariablesAreRenamedAwayFromRuleVariables) {
  Loaded f = with_aspect(R"(
aspect count {
  types {
    node Counter(v: string)
  }
  initial {
    k: Counter(v = "")
  }
  advice tick {
    pointcut {
      lhs { }
      rhs { }
    }
    interface = pointcut
    effect {
      lhs { k: Counter(v = t) }
      rhs { k: Counter(v = concat(t, "+")) }
    }
  }
}
)");
  Grammar g = weave_all(f.aogg);
  ASSERT_EQ(g.rules.size(), 1u);
  const Rule& r = g.rules[0];
  EXPECT_TRUE(validate_rule(r).empty());
  for (const auto& [id, n] : r.left.nodes()) {
    if (n.type == "Counter") {
      EXPECT_EQ(n.attrs.at("v"), AttrTerm::var("t_1"));
    } else if (n.type == "Item") {
      EXPECT_EQ(n.attrs.at("tag"), AttrTerm::var("t"));
    }
  }
  for (const auto& [id, n] : r.right.nodes())
    if (n.type == "Counter")
      EXPECT_EQ(n.attrs.at("v"), AttrTerm::concat({AttrTerm::var("t_1"), AttrTerm::lit("+")}));
  DerivationTrace run = run_grammar(g, 1, 2);
  ASSERT_EQ(run.steps.size(), 2u);
  const Node& k = run.final_graph.node(*run.final_graph.node_by_label("k"));
  EXPECT_EQ(k.attrs.at("v"), AttrTerm::lit("++"));
}

TEST(ApplyAdvice, PointcutBindingFlowsIntoEffect) {
  Loaded f = with_aspect(R"(
aspect copy {
  types {
    node Seen(tag: string)
  }
  advice remember {
    pointcut {
      lhs { x: Item(tag = u) }
      rhs { }
    }
    interface = pointcut
    effect {
      lhs { x: Item(tag = u) }
      rhs { s: Seen(tag = u) }
    }
  }
}
)");
  Grammar g = weave_all(f.aogg);
  ASSERT_EQ(g.rules.size(), 1u);
  bool seen = false;
  for (const auto& [id, n] : g.rules[0].right.nodes())
    if (n.type == "Seen") {
      seen = true;
      EXPECT_EQ(n.attrs.at("tag"), AttrTerm::var("t"));
    }
  EXPECT_TRUE(seen);
}
