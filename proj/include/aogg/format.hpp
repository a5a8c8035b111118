#pragma once

// Textual grammar format: a document model, its parser and printer, and the
// translation between documents and grammars / AOGGs.

#include "aogg/aspect.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

namespace aogg {

struct ParseError : std::runtime_error {
  std::size_t line, column;
  ParseError(std::size_t l, std::size_t c, const std::string& msg)
      : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
        line(l),
        column(c) {}
};

/// Source position. Positions never take part in document equality.
struct Pos {
  std::size_t line = 0, column = 0;
  friend bool operator==(const Pos&, const Pos&) { return true; }
};

struct NodeTypeDoc {
  Pos pos;
  std::string name;
  std::vector<AttrDecl> attrs;
  bool operator==(const NodeTypeDoc&) const = default;
};

struct EdgeTypeDoc {
  Pos pos;
  std::string name, source, target;
  bool operator==(const EdgeTypeDoc&) const = default;
};

struct TypesDoc {
  std::vector<NodeTypeDoc> nodes;
  std::vector<EdgeTypeDoc> edges;
  bool empty() const { return nodes.empty() && edges.empty(); }
  bool operator==(const TypesDoc&) const = default;
};

struct NodeDoc {
  Pos pos;
  std::string label, type;
  std::vector<std::pair<std::string, AttrTerm>> attrs;
  bool operator==(const NodeDoc&) const = default;
};

struct EdgeDoc {
  Pos pos;
  std::string label;  // empty: derived from the endpoints and type
  std::string source, type, target;
  bool operator==(const EdgeDoc&) const = default;
};

struct GraphDoc {
  std::vector<NodeDoc> nodes;
  std::vector<EdgeDoc> edges;
  bool empty() const { return nodes.empty() && edges.empty(); }
  bool operator==(const GraphDoc&) const = default;
};

struct SpanDoc {
  Pos pos;
  GraphDoc lhs, rhs;
  bool operator==(const SpanDoc&) const = default;
};

struct RuleDoc {
  Pos pos;
  std::string name;
  SpanDoc span;
  bool operator==(const RuleDoc&) const = default;
};

struct AdviceDoc {
  Pos pos;
  std::string name;
  SpanDoc pointcut;
  std::optional<SpanDoc> interface;  // absent: equal to the pointcut
  SpanDoc effect;
  bool operator==(const AdviceDoc&) const = default;
};

struct AspectDoc {
  Pos pos;
  std::string name;
  TypesDoc types;
  GraphDoc initial;
  std::vector<AdviceDoc> advices;
  bool operator==(const AspectDoc&) const = default;
};

struct ConfigEntry {
  Pos pos;
  std::string key, value;
  bool operator==(const ConfigEntry&) const = default;
};

struct GrammarDoc {
  Pos pos;
  std::string name;
  TypesDoc types;
  GraphDoc initial;
  std::vector<RuleDoc> rules;
  std::vector<AspectDoc> aspects;
  std::vector<ConfigEntry> config;
  bool operator==(const GrammarDoc&) const = default;
};

/// Label given to an edge written without one.
inline std::string derived_edge_label(const std::string& source, const std::string& type, const std::string& target) {
  return source + "-" + type + "->" + target;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class DocParser {
 public:
  explicit DocParser(std::string_view text) : text_(text) {}

  GrammarDoc parse() {
    GrammarDoc doc;
    skip();
    if (at_end()) fail("empty grammar: expected 'grammar <name>'");
    doc.pos = here();
    expect_keyword("grammar");
    doc.name = name("grammar name");
    bool seen_types = false, seen_initial = false, seen_config = false;
    while (true) {
      skip();
      if (at_end()) break;
      Pos p = here();
      std::string kw = word();
      if (kw == "types") {
        if (seen_types) fail_at(p, "duplicate 'types' section");
        seen_types = true;
        doc.types = types();
      } else if (kw == "initial") {
        if (seen_initial) fail_at(p, "duplicate 'initial' section");
        seen_initial = true;
        doc.initial = graph();
      } else if (kw == "rule") {
        RuleDoc r;
        r.pos = p;
        r.name = name("rule name");
        r.span = span_block();
        doc.rules.push_back(std::move(r));
      } else if (kw == "aspect") {
        doc.aspects.push_back(aspect(p));
      } else if (kw == "config") {
        if (seen_config) fail_at(p, "duplicate 'config' section");
        seen_config = true;
        doc.config = config();
      } else {
        fail_at(p, "expected a section (types, initial, rule, aspect, config), got '" + kw + "'");
      }
    }
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { fail_at(here(), msg); }
  [[noreturn]] static void fail_at(Pos p, const std::string& msg) { throw ParseError(p.line, p.column, msg); }

  Pos here() const { return position_of(pos_); }
  Pos position_of(std::size_t offset) const {
    Pos p{1, 1};
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
    return p;
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip() {
    while (!at_end()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++pos_;
      } else if (c == '#') {
        while (!at_end() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool accept(std::string_view s) {
    skip();
    if (text_.substr(pos_, s.size()) == s) {
      pos_ += s.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }

  std::string word() {
    skip();
    if (!is_identifier_start(peek())) fail("expected a keyword");
    std::size_t start = pos_;
    while (!at_end() && is_identifier_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }
  void expect_keyword(std::string_view kw) {
    skip();
    Pos p = here();
    std::string w = is_identifier_start(peek()) ? word() : std::string();
    if (w != kw) fail_at(p, "expected '" + std::string(kw) + "'");
  }

  /// Identifier or quoted string.
  std::string name(std::string_view what) {
    skip();
    if (peek() == '"') {
      detail::TermParser tp(text_.substr(pos_));
      AttrTerm t = term_at(tp);
      return t.string_value();
    }
    if (!is_identifier_start(peek())) fail("expected " + std::string(what));
    std::size_t start = pos_;
    while (!at_end() && is_identifier_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  AttrTerm term_at(detail::TermParser& tp) {
    try {
      AttrTerm t = tp.parse();
      pos_ += tp.position();
      return t;
    } catch (const TermSyntaxError& e) {
      Pos p = here();
      throw ParseError(p.line, p.column + e.column - 1, e.what());
    }
  }
  AttrTerm term() {
    skip();
    detail::TermParser tp(text_.substr(pos_));
    return term_at(tp);
  }

  TypesDoc types() {
    TypesDoc out;
    expect("{");
    while (!accept("}")) {
      if (at_end()) fail("unterminated 'types' block");
      Pos p = here();
      std::string kw = word();
      if (kw == "node") {
        NodeTypeDoc n{p, name("node type name"), {}};
        if (accept("(") && !accept(")")) {
          do {
            AttrDecl a;
            a.name = name("attribute name");
            expect(":");
            Pos sp = here();
            std::string s = word();
            auto sort = parse_sort(s);
            if (!sort) fail_at(sp, "unknown sort '" + s + "'");
            a.sort = *sort;
            n.attrs.push_back(std::move(a));
          } while (accept(","));
          expect(")");
        }
        out.nodes.push_back(std::move(n));
      } else if (kw == "edge") {
        EdgeTypeDoc e{p, name("edge type name"), {}, {}};
        expect(":");
        e.source = name("source node type");
        expect("->");
        e.target = name("target node type");
        out.edges.push_back(std::move(e));
      } else {
        fail_at(p, "expected 'node' or 'edge', got '" + kw + "'");
      }
    }
    return out;
  }

  GraphDoc graph() {
    GraphDoc out;
    expect("{");
    while (!accept("}")) {
      if (at_end()) fail("unterminated graph block");
      Pos p = here();
      std::string first = name("node label or edge source");
      if (accept(":")) {
        std::string second = name("node type or edge source");
        skip();
        if (peek() == '-') {
          out.edges.push_back(edge_rest(p, first, second));
          continue;
        }
        NodeDoc n{p, first, second, {}};
        if (accept("(") && !accept(")")) {
          do {
            std::string attr = name("attribute name");
            expect("=");
            n.attrs.emplace_back(attr, term());
          } while (accept(","));
          expect(")");
        }
        out.nodes.push_back(std::move(n));
      } else {
        out.edges.push_back(edge_rest(p, "", first));
      }
    }
    return out;
  }

  EdgeDoc edge_rest(Pos p, std::string label, std::string source) {
    expect("-");
    std::string type = name("edge type");
    expect("->");
    std::string target = name("edge target");
    return EdgeDoc{p, std::move(label), std::move(source), std::move(type), std::move(target)};
  }

  SpanDoc span_block() {
    SpanDoc out;
    out.pos = here();
    expect("{");
    expect_keyword("lhs");
    out.lhs = graph();
    expect_keyword("rhs");
    out.rhs = graph();
    expect("}");
    return out;
  }

  AspectDoc aspect(Pos p) {
    AspectDoc a;
    a.pos = p;
    a.name = name("aspect name");
    expect("{");
    while (!accept("}")) {
      if (at_end()) fail("unterminated aspect '" + a.name + "'");
      Pos q = here();
      std::string kw = word();
      if (kw == "types") {
        a.types = types();
      } else if (kw == "initial") {
        a.initial = graph();
      } else if (kw == "advice") {
        a.advices.push_back(advice(q));
      } else {
        fail_at(q, "expected 'types', 'initial' or 'advice', got '" + kw + "'");
      }
    }
    return a;
  }

  AdviceDoc advice(Pos p) {
    AdviceDoc a;
    a.pos = p;
    a.name = name("advice name");
    expect("{");
    expect_keyword("pointcut");
    a.pointcut = span_block();
    expect_keyword("interface");
    if (accept("=")) {
      expect_keyword("pointcut");
    } else {
      a.interface = span_block();
    }
    expect_keyword("effect");
    a.effect = span_block();
    expect("}");
    return a;
  }

  std::vector<ConfigEntry> config() {
    std::vector<ConfigEntry> out;
    expect("{");
    while (!accept("}")) {
      if (at_end()) fail("unterminated 'config' block");
      ConfigEntry e;
      e.pos = here();
      e.key = name("config key");
      expect("=");
      skip();
      if (peek() == '"') {
        e.value = name("config value");
      } else {
        std::size_t start = pos_;
        while (!at_end() && (is_identifier_char(text_[pos_]) || text_[pos_] == '-')) ++pos_;
        if (start == pos_) fail("expected a config value");
        e.value = std::string(text_.substr(start, pos_ - start));
      }
      out.push_back(std::move(e));
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline GrammarDoc parse_grammar_doc(std::string_view text) { return detail::DocParser(text).parse(); }

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline bool is_plain_name(const std::string& s) {
  if (s.empty() || !is_identifier_start(s[0])) return false;
  for (char c : s)
    if (!is_identifier_char(c)) return false;
  static const std::set<std::string> reserved{"true", "false", "concat", "rulename"};
  return !reserved.count(s);
}

inline std::string name_text(const std::string& s) { return is_plain_name(s) ? s : quote_string(s); }

inline void print_types(std::ostream& os, const TypesDoc& t, const std::string& indent) {
  os << indent << "types {\n";
  for (const auto& n : t.nodes) {
    os << indent << "  node " << name_text(n.name);
    if (!n.attrs.empty()) {
      os << "(";
      for (std::size_t i = 0; i < n.attrs.size(); ++i)
        os << (i ? ", " : "") << name_text(n.attrs[i].name) << ": " << to_string(n.attrs[i].sort);
      os << ")";
    }
    os << "\n";
  }
  for (const auto& e : t.edges)
    os << indent << "  edge " << name_text(e.name) << ": " << name_text(e.source) << " -> " << name_text(e.target)
       << "\n";
  os << indent << "}\n";
}

inline void print_graph(std::ostream& os, const std::string& keyword, const GraphDoc& g, const std::string& indent) {
  if (g.empty()) {
    os << indent << keyword << " { }\n";
    return;
  }
  os << indent << keyword << " {\n";
  for (const auto& n : g.nodes) {
    os << indent << "  " << name_text(n.label) << ": " << name_text(n.type);
    if (!n.attrs.empty()) {
      os << "(";
      for (std::size_t i = 0; i < n.attrs.size(); ++i)
        os << (i ? ", " : "") << name_text(n.attrs[i].first) << " = " << to_string(n.attrs[i].second);
      os << ")";
    }
    os << "\n";
  }
  for (const auto& e : g.edges) {
    os << indent << "  ";
    if (!e.label.empty()) os << name_text(e.label) << ": ";
    os << name_text(e.source) << " -" << name_text(e.type) << "-> " << name_text(e.target) << "\n";
  }
  os << indent << "}\n";
}

inline void print_span(std::ostream& os, const std::string& keyword, const SpanDoc& s, const std::string& indent) {
  os << indent << keyword << " {\n";
  print_graph(os, "lhs", s.lhs, indent + "  ");
  print_graph(os, "rhs", s.rhs, indent + "  ");
  os << indent << "}\n";
}

}  // namespace detail

inline std::string print_grammar_doc(const GrammarDoc& doc) {
  std::ostringstream os;
  os << "grammar " << detail::name_text(doc.name) << "\n";
  if (!doc.types.empty()) {
    os << "\n";
    detail::print_types(os, doc.types, "");
  }
  if (!doc.initial.empty()) {
    os << "\n";
    detail::print_graph(os, "initial", doc.initial, "");
  }
  for (const auto& r : doc.rules) {
    os << "\n";
    detail::print_span(os, "rule " + detail::name_text(r.name), r.span, "");
  }
  for (const auto& a : doc.aspects) {
    os << "\naspect " << detail::name_text(a.name) << " {\n";
    if (!a.types.empty()) detail::print_types(os, a.types, "  ");
    if (!a.initial.empty()) detail::print_graph(os, "initial", a.initial, "  ");
    for (const auto& adv : a.advices) {
      os << "  advice " << detail::name_text(adv.name) << " {\n";
      detail::print_span(os, "pointcut", adv.pointcut, "    ");
      if (adv.interface)
        detail::print_span(os, "interface", *adv.interface, "    ");
      else
        os << "    interface = pointcut\n";
      detail::print_span(os, "effect", adv.effect, "    ");
      os << "  }\n";
    }
    os << "}\n";
  }
  if (!doc.config.empty()) {
    os << "\nconfig {\n";
    for (const auto& e : doc.config) {
      bool plain = !e.value.empty();
      for (char c : e.value) plain = plain && (is_identifier_char(c) || c == '-');
      os << "  " << detail::name_text(e.key) << " = " << (plain ? e.value : quote_string(e.value)) << "\n";
    }
    os << "}\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Resolution: documents to grammars

struct RunConfig {
  bool injective = true;
  std::uint64_t seed = 0;
  std::size_t max_steps = 100;
  std::size_t overlap_bound = 0;
  std::size_t snapshot_threshold = 256;
};

struct Loaded {
  std::string name;
  AOGG aogg;
  RunConfig config;
};

namespace detail {

[[noreturn]] inline void fail_at(const Pos& p, const std::string& msg) { throw ParseError(p.line, p.column, msg); }

inline TypeGraph resolve_types(const TypesDoc& doc, TypeGraph base) {
  for (const auto& n : doc.nodes) {
    try {
      base.add_node_type(NodeType{n.name, n.attrs});
    } catch (const TypingError& e) {
      fail_at(n.pos, e.what());
    }
  }
  for (const auto& e : doc.edges) {
    try {
      base.add_edge_type(EdgeType{e.name, e.source, e.target});
    } catch (const TypingError& err) {
      fail_at(e.pos, err.what());
    }
  }
  return base;
}

inline Node make_node(const NodeDoc& n) {
  Node out{NodeId(0), n.type, {}, n.label};
  for (const auto& [a, t] : n.attrs)
    if (!out.attrs.emplace(a, t).second) fail_at(n.pos, "attribute '" + a + "' given twice");
  return out;
}

/// Adds the nodes and edges of a graph block to `g`. Edge endpoints are
/// looked up first among the block's own nodes, then in `g`.
inline void resolve_graph_into(TypedGraph& g, const GraphDoc& doc, const std::string& where) {
  for (const auto& n : doc.nodes) {
    if (g.node_by_label(n.label)) fail_at(n.pos, where + ": duplicate node '" + n.label + "'");
    Node node = make_node(n);
    try {
      g.add_node(node.type, node.attrs, node.label);
    } catch (const TypingError& e) {
      fail_at(n.pos, where + ": node '" + n.label + "': " + e.what());
    }
  }
  for (const auto& e : doc.edges) {
    auto s = g.node_by_label(e.source);
    auto t = g.node_by_label(e.target);
    if (!s) fail_at(e.pos, where + ": unknown node '" + e.source + "'");
    if (!t) fail_at(e.pos, where + ": unknown node '" + e.target + "'");
    std::string label = e.label.empty() ? derived_edge_label(e.source, e.type, e.target) : e.label;
    if (g.edge_by_label(label)) fail_at(e.pos, where + ": duplicate edge '" + label + "'");
    try {
      g.add_edge(e.type, *s, *t, label);
    } catch (const TypingError& err) {
      fail_at(e.pos, where + ": edge '" + label + "': " + err.what());
    }
  }
}

inline Rule resolve_span(const std::string& name, const SpanDoc& s, const TypeGraphPtr& types, const Pos& pos) {
  TypedGraph left(types), right(types);
  resolve_graph_into(left, s.lhs, "rule '" + name + "' lhs");
  resolve_graph_into(right, s.rhs, "rule '" + name + "' rhs");
  Rule r;
  try {
    r = rule_from_labels(name, std::move(left), std::move(right));
  } catch (const TypingError& e) {
    fail_at(pos, e.what());
  }
  for (const auto& v : validate_rule(r)) fail_at(pos, v.message);
  return r;
}

/// Maps each component of `from` to `to` by element labels.
inline RuleMorphism morphism_by_labels(const Rule& from, const Rule& to, const std::string& what, const Pos& pos) {
  RuleMorphism m;
  auto component = [&](const TypedGraph& a, const TypedGraph& b, GraphMorphism& out, const char* part) {
    for (const auto& [id, n] : a.nodes()) {
      auto img = b.node_by_label(n.label);
      if (!img) fail_at(pos, what + ": " + part + " node '" + n.label + "' has no counterpart");
      out.nodes[id] = *img;
    }
    for (const auto& [id, e] : a.edges()) {
      auto img = b.edge_by_label(e.label);
      if (!img) fail_at(pos, what + ": " + part + " edge '" + e.label + "' has no counterpart");
      out.edges[id] = *img;
    }
  };
  component(from.left, to.left, m.left, "lhs");
  component(from.interface, to.interface, m.interface, "preserved");
  component(from.right, to.right, m.right, "rhs");
  return m;
}

inline RunConfig resolve_config(const std::vector<ConfigEntry>& entries) {
  RunConfig c;
  auto number = [](const ConfigEntry& e) -> std::uint64_t {
    try {
      std::size_t used = 0;
      if (!e.value.empty() && std::isdigit(static_cast<unsigned char>(e.value[0]))) {
        std::uint64_t v = std::stoull(e.value, &used);
        if (used == e.value.size()) return v;
      }
    } catch (const std::exception&) {
    }
    fail_at(e.pos, "config '" + e.key + "' expects a non-negative integer, got '" + e.value + "'");
  };
  for (const auto& e : entries) {
    if (e.key == "match") {
      if (e.value == "injective")
        c.injective = true;
      else if (e.value == "noninjective")
        c.injective = false;
      else
        fail_at(e.pos, "config 'match' expects injective or noninjective");
    } else if (e.key == "seed") {
      c.seed = number(e);
    } else if (e.key == "max_steps") {
      c.max_steps = number(e);
    } else if (e.key == "overlap_bound") {
      c.overlap_bound = number(e);
    } else if (e.key == "snapshot_threshold") {
      c.snapshot_threshold = number(e);
    } else {
      fail_at(e.pos, "unknown config key '" + e.key + "'");
    }
  }
  return c;
}

}  // namespace detail

/// Full validation: typing, rule well-formedness, advice morphisms and
/// aspect extension consistency. Errors are ParseErrors.
inline Loaded resolve(const GrammarDoc& doc) {
  Loaded out;
  out.name = doc.name;
  auto types = std::make_shared<TypeGraph>(detail::resolve_types(doc.types, TypeGraph{}));
  out.aogg.base.types = types;
  out.aogg.base.initial = TypedGraph(types);
  detail::resolve_graph_into(out.aogg.base.initial, doc.initial, "initial graph");
  std::set<std::string> rule_names;
  for (const auto& r : doc.rules) {
    if (!rule_names.insert(r.name).second) detail::fail_at(r.pos, "duplicate rule '" + r.name + "'");
    out.aogg.base.rules.push_back(detail::resolve_span(r.name, r.span, types, r.pos));
  }
  std::set<std::string> aspect_names;
  TypeGraph all_types = *types;
  for (const auto& a : doc.aspects) {
    if (!aspect_names.insert(a.name).second) detail::fail_at(a.pos, "duplicate aspect '" + a.name + "'");
    if (a.name.find('.') != std::string::npos) detail::fail_at(a.pos, "aspect names cannot contain '.'");
    Aspect aspect;
    aspect.name = a.name;
    TypeGraph own = detail::resolve_types(a.types, *types);
    for (const auto& [n, t] : own.node_types())
      if (!types->find_node_type(n)) aspect.added_types.add_node_type(t);
    try {
      for (const auto& [n, t] : own.edge_types())
        if (!types->find_edge_type(n)) {
          for (const std::string& end : {t.source, t.target})
            if (!aspect.added_types.find_node_type(end))
              aspect.added_types.add_node_type(*own.find_node_type(end));
          aspect.added_types.add_edge_type(t);
        }
      all_types = all_types.merged_with(aspect.added_types);
    } catch (const TypingError& e) {
      detail::fail_at(a.pos, "aspect '" + a.name + "': " + e.what());
    }
    auto aspect_types = std::make_shared<TypeGraph>(std::move(own));
    // the initial extension is checked against the base initial graph
    TypedGraph probe = out.aogg.base.initial.widened(aspect_types);
    std::size_t first_new = probe.next_node_id();
    std::size_t first_new_edge = probe.next_edge_id();
    detail::resolve_graph_into(probe, a.initial, "aspect '" + a.name + "' initial");
    for (const auto& [id, n] : probe.nodes())
      if (id.value >= first_new) aspect.added_initial.nodes.push_back(n);
    for (const auto& [id, e] : probe.edges())
      if (id.value >= first_new_edge)
        aspect.added_initial.edges.push_back(
            {e.label, e.type, probe.node(e.source).label, probe.node(e.target).label});

    std::set<std::string> advice_names;
    for (const auto& adv : a.advices) {
      if (!advice_names.insert(adv.name).second) detail::fail_at(adv.pos, "duplicate advice '" + adv.name + "'");
      Advice x;
      x.name = adv.name;
      x.pointcut = detail::resolve_span(adv.name + ".pointcut", adv.pointcut, aspect_types, adv.pointcut.pos);
      x.interface = adv.interface
                        ? detail::resolve_span(adv.name + ".interface", *adv.interface, aspect_types, adv.interface->pos)
                        : x.pointcut;
      x.interface.name = adv.name + ".interface";
      x.effect = detail::resolve_span(adv.name + ".effect", adv.effect, aspect_types, adv.effect.pos);
      x.to_pointcut = detail::morphism_by_labels(x.interface, x.pointcut, "advice '" + adv.name + "' pointcut", adv.pos);
      x.to_effect = detail::morphism_by_labels(x.interface, x.effect, "advice '" + adv.name + "' effect", adv.pos);
      auto problems = validate_advice(x);
      if (!problems.empty()) detail::fail_at(adv.pos, problems.front());
      aspect.advices.push_back(std::move(x));
    }
    out.aogg.aspects.push_back(std::move(aspect));
  }
  out.config = detail::resolve_config(doc.config);
  return out;
}

inline Loaded parse_grammar(std::string_view text) { return resolve(parse_grammar_doc(text)); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline Loaded load_grammar_file(const std::string& path) { return parse_grammar(read_file(path)); }

// ---------------------------------------------------------------------------
// Unresolution: grammars to documents

namespace detail {

inline TypesDoc types_doc(const TypeGraph& t) {
  TypesDoc out;
  for (const auto& [name, n] : t.node_types()) out.nodes.push_back(NodeTypeDoc{{}, name, n.attrs});
  for (const auto& [name, e] : t.edge_types()) out.edges.push_back(EdgeTypeDoc{{}, name, e.source, e.target});
  return out;
}

inline NodeDoc node_doc(const TypedGraph& g, const Node& n, const std::string& label) {
  NodeDoc out{{}, label, n.type, {}};
  for (const auto& a : g.types()->find_node_type(n.type)->attrs) out.attrs.emplace_back(a.name, n.attrs.at(a.name));
  return out;
}

/// Chooses printable, unique names. Labels are reused when they are free.
class Namer {
 public:
  std::string take(const std::string& wanted, const std::string& fallback) {
    if (!wanted.empty() && used_.insert(wanted).second) return wanted;
    for (std::size_t k = 0;; ++k) {
      std::string c = fallback + (k ? "_" + std::to_string(k) : "");
      if (used_.insert(c).second) return c;
    }
  }
  bool used(const std::string& s) const { return used_.count(s) != 0; }

 private:
  std::set<std::string> used_;
};

inline EdgeDoc edge_doc(const Edge& e, const std::string& name, const std::map<NodeId, std::string>& names) {
  const std::string& s = names.at(e.source);
  const std::string& t = names.at(e.target);
  return EdgeDoc{{}, name == derived_edge_label(s, e.type, t) ? std::string() : name, s, e.type, t};
}

inline GraphDoc graph_doc(const TypedGraph& g) {
  GraphDoc out;
  Namer nodes, edges;
  std::map<NodeId, std::string> names;
  for (const auto& [id, n] : g.nodes()) {
    names[id] = nodes.take(n.label, "n" + std::to_string(id.value));
    out.nodes.push_back(node_doc(g, n, names[id]));
  }
  for (const auto& [id, e] : g.edges()) {
    std::string derived = derived_edge_label(names.at(e.source), e.type, names.at(e.target));
    std::string name = edges.take(e.label == derived || e.label.empty() ? derived : e.label,
                                  "e" + std::to_string(id.value));
    out.edges.push_back(edge_doc(e, name, names));
  }
  return out;
}

inline SpanDoc span_doc(const Rule& r) {
  SpanDoc out;
  Namer nodes, edges;
  std::map<NodeId, std::string> lnames, rnames;
  const GraphMorphism l_inv = r.l_inverse();
  for (const auto& [id, n] : r.left.nodes()) lnames[id] = nodes.take(n.label, "n" + std::to_string(id.value));
  for (const auto& [k, lid] : r.l.nodes) rnames[r.r(k)] = lnames.at(lid);
  for (const auto& [id, n] : r.right.nodes())
    if (!rnames.count(id)) rnames[id] = nodes.take(n.label, "n" + std::to_string(id.value) + "r");
  for (const auto& [id, n] : r.left.nodes()) out.lhs.nodes.push_back(node_doc(r.left, n, lnames.at(id)));
  for (const auto& [id, n] : r.right.nodes()) out.rhs.nodes.push_back(node_doc(r.right, n, rnames.at(id)));

  std::map<EdgeId, std::string> lenames, renames;
  auto wanted = [](const Edge& e, const std::map<NodeId, std::string>& names) {
    std::string derived = derived_edge_label(names.at(e.source), e.type, names.at(e.target));
    return e.label.empty() ? derived : e.label;
  };
  for (const auto& [id, e] : r.left.edges()) lenames[id] = edges.take(wanted(e, lnames), "e" + std::to_string(id.value));
  for (const auto& [k, lid] : r.l.edges) renames[r.r(k)] = lenames.at(lid);
  for (const auto& [id, e] : r.right.edges())
    if (!renames.count(id)) renames[id] = edges.take(wanted(e, rnames), "e" + std::to_string(id.value) + "r");
  for (const auto& [id, e] : r.left.edges()) out.lhs.edges.push_back(edge_doc(e, lenames.at(id), lnames));
  for (const auto& [id, e] : r.right.edges()) out.rhs.edges.push_back(edge_doc(e, renames.at(id), rnames));
  return out;
}

}  // namespace detail

/// Document for a plain grammar (no aspects).
inline GrammarDoc to_doc(const Grammar& g, const std::string& name, const std::vector<ConfigEntry>& config = {}) {
  GrammarDoc out;
  out.name = name;
  out.types = detail::types_doc(*g.types);
  out.initial = detail::graph_doc(g.initial);
  for (const auto& r : g.rules) out.rules.push_back(RuleDoc{{}, r.name, detail::span_doc(r)});
  out.config = config;
  return out;
}

inline std::string print_grammar(const Grammar& g, const std::string& name) {
  return print_grammar_doc(to_doc(g, name));
}

}  // namespace aogg
