#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace aogg;
using namespace testing_support;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "aogg_format_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

void expect_parse_error(const std::string& text, std::size_t line, const std::string& fragment) {
  try {
    parse_grammar(text);
    ADD_FAILURE() << "no error for:\n" << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, line) << e.what();
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

Grammar random_grammar(Rng& rng) {
  Grammar g;
  g.types = std::make_shared<TypeGraph>(random_type_graph(rng, 4, 4, true));
  g.initial = random_graph(rng, g.types, 4, 4);
  for (int i = rng.uniform(0, 3); i > 0; --i) g.rules.push_back(random_rule(rng, g.types, 6, "r" + std::to_string(i)));
  return g;
}

}  // namespace

TEST(Format, FixtureLoads) {
  Loaded f = load_fixture();
  EXPECT_EQ(f.name, "ClientServer");
  EXPECT_EQ(f.aogg.base.types->node_type_count(), 4u);
  EXPECT_EQ(f.aogg.base.types->edge_type_count(), 4u);
  EXPECT_EQ(f.aogg.base.initial.node_count(), 10u);
  EXPECT_EQ(f.aogg.base.initial.edge_count(), 14u);
  EXPECT_EQ(f.aogg.base.rules.size(), 6u);
  ASSERT_EQ(f.aogg.aspects.size(), 2u);
  EXPECT_EQ(f.aogg.aspects[0].advices.size() + f.aogg.aspects[1].advices.size(), 3u);
  EXPECT_TRUE(f.config.injective);
  EXPECT_EQ(f.config.seed, 1u);
  EXPECT_EQ(f.config.max_steps, 20u);
}

TEST(Format, ErrorsCarryPositions) {
  expect_parse_error("grammar G\ntypes {\n  node A\n}\ninitial {\n  a: A\n  a -e-> a\n}\n", 7, "e");
  expect_parse_error("grammar G\ntypes {\n  node A\n  edge e: A -> B\n}\n", 4, "B");
  expect_parse_error("grammar G\ntypes {\n  node A(n: int)\n}\ninitial {\n  a: A(n = \"x\")\n}\n", 6, "");
  expect_parse_error("grammar G\ntypes { node A }\nrule r {\n  lhs { }\n  rhs { a: A(n = 1) }\n}\n", 5, "");
  expect_parse_error("grammar G\nconfig {\n  seed = -1\n}\n", 3, "seed");
  expect_parse_error("grammar G\nconfig {\n  colour = 1\n}\n", 3, "colour");
  expect_parse_error("grammar G\nconfig {\n  match = sometimes\n}\n", 3, "match");
}

TEST(Format, EmptyFileIsAnError) {
  EXPECT_THROW(parse_grammar(""), ParseError);
  EXPECT_THROW(parse_grammar("  # only a comment\n"), ParseError);
}

TEST(Format, SectionsInAnyOrderAndQuotedNames) {
  Loaded f = parse_grammar(R"(
grammar "My Grammar"
config { seed = 5 }
initial { "a node": A }
types { node A }
)");
  EXPECT_EQ(f.name, "My Grammar");
  EXPECT_EQ(f.config.seed, 5u);
  EXPECT_TRUE(f.aogg.base.initial.node_by_label("a node").has_value());
}

TEST(Format, DocumentRoundTripProperty) {
  Rng rng(51);
  for (int i = 0; i < 100; ++i) {
    Grammar g = random_grammar(rng);
    GrammarDoc doc = to_doc(g, "G" + std::to_string(i));
    std::string text = print_grammar_doc(doc);
    GrammarDoc again = parse_grammar_doc(text);
    ASSERT_EQ(again, doc) << text;
    EXPECT_EQ(print_grammar_doc(again), text);
    Loaded back = parse_grammar(text);
    EXPECT_TRUE(grammars_isomorphic(back.aogg.base, g)) << text;
  }
}

TEST(Format, FixtureDocumentRoundTrip) {
  GrammarDoc doc = parse_grammar_doc(read_file(fixture("client_server.aogg")));
  EXPECT_EQ(parse_grammar_doc(print_grammar_doc(doc)), doc);
}

TEST(Format, WovenAndEncodedGrammarsReparse) {
  Loaded f = load_fixture();
  Grammar woven = weave_all(f.aogg);
  Loaded w = parse_grammar(print_grammar(woven, "W"));
  EXPECT_TRUE(grammars_isomorphic(w.aogg.base, woven));
  Grammar enc = encode_aogg(f.aogg);
  Loaded e = parse_grammar(print_grammar(enc, "E"));
  EXPECT_TRUE(*e.aogg.base.types == *enc.types);
  EXPECT_TRUE(is_isomorphic(e.aogg.base.initial, enc.initial));
  ASSERT_EQ(e.aogg.base.rules.size(), enc.rules.size());
  for (const auto& r : enc.rules) {
    const Rule* back = e.aogg.base.find_rule(r.name);
    ASSERT_NE(back, nullptr) << r.name;
    EXPECT_TRUE(is_isomorphic(back->left, r.left, AttrComparison::Alpha));
    EXPECT_TRUE(is_isomorphic(back->interface, r.interface, AttrComparison::Alpha));
    EXPECT_TRUE(is_isomorphic(back->right, r.right, AttrComparison::Alpha));
  }
}

TEST(Dot, IsDeterministic) {
  Loaded a = load_fixture(), b = load_fixture();
  EXPECT_EQ(export_dot(a.aogg.base.initial, "x"), export_dot(b.aogg.base.initial, "x"));
  EXPECT_EQ(export_dot(a.aogg.base.rules[0]), export_dot(b.aogg.base.rules[0]));
  EXPECT_EQ(export_dot(encode_grammar(a.aogg.base)), export_dot(encode_grammar(b.aogg.base)));
  EXPECT_EQ(export_dot(TypedGraph()), "digraph \"G\" {\n}\n");
  const std::string rule = export_dot(a.aogg.base.rules[0]);
  EXPECT_NE(rule.find("cluster_L"), std::string::npos);
  EXPECT_NE(rule.find("style=dashed"), std::string::npos);
}

TEST(Report, CpaJsonRoundTrip) {
  Loaded f = load_fixture();
  CpaReport r = analyze(f.aogg.base.rules);
  ReportDoc doc = cpa_report_doc(r, "both", false);
  ReportDoc back = ReportDoc::parse(doc.dump());
  EXPECT_EQ(back, doc);
  CpaReport again = cpa_report_from_doc(back);
  EXPECT_EQ(again.conflicts.nonzero(), r.conflicts.nonzero());
  EXPECT_EQ(again.dependencies.nonzero(), r.dependencies.nonzero());
  for (const auto& [a, b] : r.conflicts.nonzero()) EXPECT_EQ(again.conflicts.count(a, b), r.conflicts.count(a, b));
  EXPECT_EQ(doc.body.count("seconds"), 0u);
  EXPECT_THROW(ReportDoc::parse(R"({"schema_version": 99, "kind": "cpa", "body": {}})"), std::runtime_error);
}

TEST(Report, TraceJsonRoundTrip) {
  Loaded f = load_fixture();
  DerivationTrace t = run_grammar(f.aogg.base, 3, 20);
  ReportDoc doc = trace_report_doc(t, 3);
  DerivationTrace back = trace_from_doc(ReportDoc::parse(doc.dump()), f.aogg.base.types);
  ASSERT_EQ(back.steps.size(), t.steps.size());
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    EXPECT_EQ(back.steps[i].rule, t.steps[i].rule);
    EXPECT_EQ(back.steps[i].match, t.steps[i].match);
    EXPECT_EQ(back.steps[i].hash, t.steps[i].hash);
  }
  EXPECT_EQ(back.status, t.status);
  EXPECT_TRUE(back.final_graph.same_elements(t.final_graph));
}

TEST(Cli, ValidateReportsCounts) {
  CliResult r = cli({"validate", fixture("client_server.aogg")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out, "ok: grammar ClientServer: 6 rules, 2 aspects, 3 advices\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"cpa", fixture("client_server.aogg"), "--mode", "sideways"}).code, kExitUsage);
  EXPECT_EQ(cli({"validate", fixture("missing.aogg")}).code, kExitInvalid);
  CliResult dangling = cli({"run", fixture("gluing_dangling.aogg"), "--base"});
  EXPECT_EQ(dangling.code, kExitOk) << dangling.err;
  EXPECT_NE(dangling.out.find("stopped-no-match"), std::string::npos);
  EXPECT_EQ(cli({"cpa", fixture("interference.aogg"), "--weaving"}).code, kExitOk);
  EXPECT_EQ(cli({"cpa", fixture("interference.aogg"), "--weaving", "--strict"}).code, kExitInterference);
  EXPECT_EQ(cli({"cpa", fixture("client_server.aogg"), "--weaving", "--strict"}).code, kExitOk);
  EXPECT_EQ(cli({"weave", fixture("client_server.aogg"), "--order", "log"}).code, kExitUsage);
}

TEST(Cli, InvalidFileNamesLineAndColumn) {
  const std::string path = temp_path("bad.aogg");
  std::ofstream(path) << "grammar Bad\ntypes {\n  node A\n}\ninitial {\n  a: Nope\n}\n";
  CliResult r = cli({"validate", path});
  EXPECT_EQ(r.code, kExitInvalid);
  EXPECT_NE(r.err.find("line 6"), std::string::npos) << r.err;
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
  const std::string file = fixture("client_server.aogg");
  for (std::vector<std::string> args : {std::vector<std::string>{"run", file, "--seed", "7"},
                                        std::vector<std::string>{"cpa", file, "--mode", "both", "--format", "json"},
                                        std::vector<std::string>{"cpa", file, "--format", "table"},
                                        std::vector<std::string>{"weave", file},
                                        std::vector<std::string>{"encode", file},
                                        std::vector<std::string>{"encode", file, "--dot"},
                                        std::vector<std::string>{"commute", file}}) {
    CliResult a = cli(args), b = cli(args);
    EXPECT_EQ(a.code, kExitOk) << args[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << args[0];
  }
}

TEST(Cli, WovenAndEncodedOutputsValidate) {
  const std::string file = fixture("client_server.aogg");
  const std::string woven = temp_path("woven.aogg"), encoded = temp_path("encoded.aogg");
  ASSERT_EQ(cli({"weave", file, "-o", woven}).code, kExitOk);
  ASSERT_EQ(cli({"encode", file, "-o", encoded}).code, kExitOk);
  EXPECT_EQ(cli({"validate", woven}).code, kExitOk);
  EXPECT_EQ(cli({"validate", encoded}).code, kExitOk);
}

TEST(Cli, RunWritesTraceAndHonoursZeroSteps) {
  const std::string file = fixture("client_server.aogg");
  CliResult zero = cli({"run", file, "--max-steps", "0"});
  EXPECT_EQ(zero.code, kExitOk);
  EXPECT_NE(zero.out.find("steps: 0"), std::string::npos);
  const std::string trace = temp_path("trace.json");
  ASSERT_EQ(cli({"run", file, "--trace", trace}).code, kExitOk);
  ReportDoc doc = ReportDoc::parse(read_file(trace));
  EXPECT_EQ(doc.kind, "trace");
}

TEST(Cli, CommuteAgreesOnFixture) {
  CliResult r = cli({"commute", fixture("client_server.aogg")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "orders agree: 2 weaving orders, 6 rules each\n");
}

TEST(Cli, OverlapBoundFromEnvironment) {
  const std::string file = fixture("client_server.aogg");
  setenv(kOverlapBoundEnv, "1", 1);
  CliResult bounded = cli({"cpa", file, "--format", "json"});
  unsetenv(kOverlapBoundEnv);
  ASSERT_EQ(bounded.code, kExitOk);
  ReportDoc doc = ReportDoc::parse(bounded.out);
  EXPECT_TRUE(cpa_report_from_doc(doc).conflicts.truncated);
  setenv(kOverlapBoundEnv, "lots", 1);
  EXPECT_EQ(cli({"cpa", file}).code, kExitUsage);
  unsetenv(kOverlapBoundEnv);
}
