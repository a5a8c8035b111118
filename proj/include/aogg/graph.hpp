#pragma once

// Typed attributed graphs: type graphs, attribute terms, instance graphs and
// identifier-based graph morphisms.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace aogg {

/// Strongly typed element identifier, scoped to the graph that owns it.
template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}
  constexpr auto operator<=>(const Id&) const = default;
};

using NodeId = Id<struct NodeTag>;
using EdgeId = Id<struct EdgeTag>;

struct TypingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TermSyntaxError : std::runtime_error {
  std::size_t column;
  TermSyntaxError(const std::string& what, std::size_t col)
      : std::runtime_error(what), column(col) {}
};

// ---------------------------------------------------------------------------
// Attribute terms

enum class Sort { String, Int, Bool };

inline std::string_view to_string(Sort s) {
  switch (s) {
    case Sort::String: return "string";
    case Sort::Int: return "int";
    case Sort::Bool: return "bool";
  }
  return "?";
}

inline std::optional<Sort> parse_sort(std::string_view s) {
  if (s == "string") return Sort::String;
  if (s == "int") return Sort::Int;
  if (s == "bool") return Sort::Bool;
  return std::nullopt;
}

using Value = std::variant<std::string, std::int64_t, bool>;

inline Sort sort_of(const Value& v) {
  if (std::holds_alternative<std::string>(v)) return Sort::String;
  if (std::holds_alternative<std::int64_t>(v)) return Sort::Int;
  return Sort::Bool;
}

/// Attribute expression: a literal, a variable, string concatenation, or the
/// reflective name of the rule being applied.
class AttrTerm {
 public:
  struct Literal {
    Value value;
  };
  struct Var {
    std::string name;
  };
  struct Concat {
    std::vector<AttrTerm> parts;
  };
  struct RuleName {};

  AttrTerm() : node_(Literal{std::string{}}) {}

  static AttrTerm lit(std::string s) { return AttrTerm(Literal{std::move(s)}); }
  static AttrTerm lit(const char* s) { return lit(std::string(s)); }
  static AttrTerm lit(std::int64_t i) { return AttrTerm(Literal{i}); }
  static AttrTerm lit(int i) { return lit(static_cast<std::int64_t>(i)); }
  static AttrTerm lit(bool b) { return AttrTerm(Literal{b}); }
  static AttrTerm lit(Value v) { return AttrTerm(Literal{std::move(v)}); }
  static AttrTerm var(std::string name) { return AttrTerm(Var{std::move(name)}); }
  static AttrTerm concat(std::vector<AttrTerm> parts) {
    return AttrTerm(Concat{std::move(parts)});
  }
  static AttrTerm rule_name() { return AttrTerm(RuleName{}); }

  bool is_literal() const { return std::holds_alternative<Literal>(node_); }
  bool is_var() const { return std::holds_alternative<Var>(node_); }
  bool is_concat() const { return std::holds_alternative<Concat>(node_); }
  bool is_rule_name() const { return std::holds_alternative<RuleName>(node_); }

  const Value& literal() const { return std::get<Literal>(node_).value; }
  const std::string& var_name() const { return std::get<Var>(node_).name; }
  const std::vector<AttrTerm>& parts() const { return std::get<Concat>(node_).parts; }

  bool is_string_literal() const {
    return is_literal() && std::holds_alternative<std::string>(literal());
  }
  const std::string& string_value() const { return std::get<std::string>(literal()); }

  /// Collects every variable name occurring in the term.
  void collect_vars(std::set<std::string>& out) const {
    if (is_var()) out.insert(var_name());
    if (is_concat())
      for (const auto& p : parts()) p.collect_vars(out);
  }
  bool is_ground() const {
    std::set<std::string> vs;
    collect_vars(vs);
    return vs.empty();
  }

  friend bool operator==(const AttrTerm& a, const AttrTerm& b) {
    if (a.node_.index() != b.node_.index()) return false;
    if (a.is_literal()) return a.literal() == b.literal();
    if (a.is_var()) return a.var_name() == b.var_name();
    if (a.is_concat()) return a.parts() == b.parts();
    return true;
  }

 private:
  template <class T>
  explicit AttrTerm(T n) : node_(std::move(n)) {}

  std::variant<Literal, Var, Concat, RuleName> node_;
};

using Binding = std::map<std::string, AttrTerm>;

inline std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

inline std::string to_string(const Value& v) {
  if (auto* s = std::get_if<std::string>(&v)) return quote_string(*s);
  if (auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  return std::get<bool>(v) ? "true" : "false";
}

/// Canonical textual form; `parse_term` is its inverse.
inline std::string to_string(const AttrTerm& t) {
  if (t.is_literal()) return to_string(t.literal());
  if (t.is_var()) return t.var_name();
  if (t.is_rule_name()) return "rulename()";
  std::string out = "concat(";
  for (std::size_t i = 0; i < t.parts().size(); ++i) {
    if (i) out += ", ";
    out += to_string(t.parts()[i]);
  }
  return out + ")";
}

inline bool is_identifier_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool is_identifier_char(char c) {
  return is_identifier_start(c) || (c >= '0' && c <= '9') || c == '.';
}

namespace detail {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  AttrTerm parse_all() {
    AttrTerm t = parse();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return t;
  }

  AttrTerm parse() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a term");
    char c = text_[pos_];
    if (c == '"') return AttrTerm::lit(parse_string());
    if (c == '-' || (c >= '0' && c <= '9')) return parse_int();
    if (!is_identifier_start(c)) fail(std::string("unexpected character '") + c + "'");
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_identifier_char(text_[pos_])) ++pos_;
    std::string word(text_.substr(start, pos_ - start));
    if (word == "true") return AttrTerm::lit(true);
    if (word == "false") return AttrTerm::lit(false);
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      if (word == "rulename") {
        expect(')');
        return AttrTerm::rule_name();
      }
      if (word != "concat") fail("unknown function '" + word + "'");
      std::vector<AttrTerm> parts;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        ++pos_;
        return AttrTerm::concat(std::move(parts));
      }
      while (true) {
        parts.push_back(parse());
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
      return AttrTerm::concat(std::move(parts));
    }
    return AttrTerm::var(std::move(word));
  }

  std::size_t position() const { return pos_; }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw TermSyntaxError(msg, pos_ + 1);
  }
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string parse_string() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) fail("unterminated escape");
        char e = text_[pos_++];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unknown escape '\\") + e + "'");
        }
      } else {
        out += c;
      }
    }
    if (pos_ >= text_.size()) fail("unterminated string literal");
    ++pos_;
    return out;
  }
  AttrTerm parse_int() {
    std::size_t start = pos_;
    if (text_[pos_] == '-') ++pos_;
    if (pos_ >= text_.size() || text_[pos_] < '0' || text_[pos_] > '9') fail("malformed integer");
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    return AttrTerm::lit(static_cast<std::int64_t>(std::stoll(std::string(text_.substr(start, pos_ - start)))));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline AttrTerm parse_term(std::string_view text) {
  return detail::TermParser(text).parse_all();
}

/// Substitutes bound variables; unbound ones are left in place.
inline AttrTerm substitute(const AttrTerm& t, const Binding& b) {
  if (t.is_var()) {
    auto it = b.find(t.var_name());
    return it == b.end() ? t : it->second;
  }
  if (t.is_concat()) {
    std::vector<AttrTerm> parts;
    parts.reserve(t.parts().size());
    for (const auto& p : t.parts()) parts.push_back(substitute(p, b));
    return AttrTerm::concat(std::move(parts));
  }
  return t;
}

/// Folds concatenations of string literals and resolves rulename(); terms
/// that still contain variables stay symbolic.
inline AttrTerm simplify(const AttrTerm& t, const std::optional<std::string>& rule_name) {
  if (t.is_rule_name()) return rule_name ? AttrTerm::lit(*rule_name) : t;
  if (!t.is_concat()) return t;
  std::vector<AttrTerm> parts;
  bool all_strings = true;
  for (const auto& p : t.parts()) {
    parts.push_back(simplify(p, rule_name));
    all_strings = all_strings && parts.back().is_string_literal();
  }
  if (!all_strings) return AttrTerm::concat(std::move(parts));
  std::string joined;
  for (const auto& p : parts) joined += p.string_value();
  return AttrTerm::lit(std::move(joined));
}

namespace detail {

inline void undo_to(Binding& b, std::vector<std::string>& trail, std::size_t mark) {
  while (trail.size() > mark) {
    b.erase(trail.back());
    trail.pop_back();
  }
}

}  // namespace detail

/// One-sided matching of `pattern` against `value`. New variable bindings are
/// appended to `trail`; on failure the bindings made by this call are undone.
inline bool match_term(const AttrTerm& pattern, const AttrTerm& value, Binding& binding,
                       std::vector<std::string>& trail) {
  const std::size_t mark = trail.size();
  auto go = [&](auto&& self, const AttrTerm& p, const AttrTerm& v) -> bool {
    if (p.is_var()) {
      auto it = binding.find(p.var_name());
      if (it != binding.end()) return it->second == v;
      binding.emplace(p.var_name(), v);
      trail.push_back(p.var_name());
      return true;
    }
    if (p.is_literal()) return v.is_literal() && v.literal() == p.literal();
    if (p.is_rule_name()) return v.is_rule_name();
    if (v.is_concat() && v.parts().size() == p.parts().size()) {
      for (std::size_t i = 0; i < p.parts().size(); ++i)
        if (!self(self, p.parts()[i], v.parts()[i])) return false;
      return true;
    }
    AttrTerm ground = simplify(substitute(p, binding), std::nullopt);
    return ground.is_ground() && !ground.is_concat() && ground == v;
  };
  if (go(go, pattern, value)) return true;
  detail::undo_to(binding, trail, mark);
  return false;
}

/// Variable renaming bijection used for alpha-equivalence of terms.
struct VarRenaming {
  std::map<std::string, std::string> forward, backward;
  std::vector<std::string> trail;

  bool alpha_equal(const AttrTerm& a, const AttrTerm& b) {
    const std::size_t mark = trail.size();
    if (go(a, b)) return true;
    undo(mark);
    return false;
  }
  void undo(std::size_t mark) {
    while (trail.size() > mark) {
      const std::string& name = trail.back();
      backward.erase(forward.at(name));
      forward.erase(name);
      trail.pop_back();
    }
  }

 private:
  bool go(const AttrTerm& a, const AttrTerm& b) {
    if (a.is_var() != b.is_var()) return false;
    if (a.is_var()) {
      auto f = forward.find(a.var_name());
      auto r = backward.find(b.var_name());
      if (f != forward.end() || r != backward.end())
        return f != forward.end() && r != backward.end() && f->second == b.var_name() &&
               r->second == a.var_name();
      forward.emplace(a.var_name(), b.var_name());
      backward.emplace(b.var_name(), a.var_name());
      trail.push_back(a.var_name());
      return true;
    }
    if (a.is_concat() && b.is_concat()) {
      if (a.parts().size() != b.parts().size()) return false;
      for (std::size_t i = 0; i < a.parts().size(); ++i)
        if (!go(a.parts()[i], b.parts()[i])) return false;
      return true;
    }
    return a == b;
  }
};

// ---------------------------------------------------------------------------
// Type graphs

struct AttrDecl {
  std::string name;
  Sort sort = Sort::String;
  friend bool operator==(const AttrDecl&, const AttrDecl&) = default;
};

struct NodeType {
  std::string name;
  std::vector<AttrDecl> attrs;
  friend bool operator==(const NodeType&, const NodeType&) = default;

  const AttrDecl* find_attr(std::string_view n) const {
    for (const auto& a : attrs)
      if (a.name == n) return &a;
    return nullptr;
  }
};

struct EdgeType {
  std::string name;
  std::string source;
  std::string target;
  friend bool operator==(const EdgeType&, const EdgeType&) = default;
};

/// Node and edge kinds. Names are unique across both kinds; containers are
/// name-ordered so equality is set equality.
class TypeGraph {
 public:
  void add_node_type(NodeType t) {
    check_fresh(t.name);
    std::set<std::string> seen;
    for (const auto& a : t.attrs)
      if (!seen.insert(a.name).second)
        throw TypingError("duplicate attribute '" + a.name + "' on node type '" + t.name + "'");
    std::string key = t.name;
    node_types_.emplace(std::move(key), std::move(t));
  }

  void add_edge_type(EdgeType t) {
    check_fresh(t.name);
    if (!find_node_type(t.source))
      throw TypingError("edge type '" + t.name + "' has undeclared source '" + t.source + "'");
    if (!find_node_type(t.target))
      throw TypingError("edge type '" + t.name + "' has undeclared target '" + t.target + "'");
    std::string key = t.name;
    edge_types_.emplace(std::move(key), std::move(t));
  }

  const NodeType* find_node_type(std::string_view name) const {
    auto it = node_types_.find(std::string(name));
    return it == node_types_.end() ? nullptr : &it->second;
  }
  const EdgeType* find_edge_type(std::string_view name) const {
    auto it = edge_types_.find(std::string(name));
    return it == edge_types_.end() ? nullptr : &it->second;
  }

  const std::map<std::string, NodeType>& node_types() const { return node_types_; }
  const std::map<std::string, EdgeType>& edge_types() const { return edge_types_; }
  std::size_t node_type_count() const { return node_types_.size(); }
  std::size_t edge_type_count() const { return edge_types_.size(); }

  /// True when every type of `other` is declared identically here.
  bool includes(const TypeGraph& other) const {
    for (const auto& [n, t] : other.node_types_) {
      const NodeType* mine = find_node_type(n);
      if (!mine || !(*mine == t)) return false;
    }
    for (const auto& [n, t] : other.edge_types_) {
      const EdgeType* mine = find_edge_type(n);
      if (!mine || !(*mine == t)) return false;
    }
    return true;
  }

  /// Union with `other`; identical redeclarations are accepted.
  TypeGraph merged_with(const TypeGraph& other) const {
    TypeGraph out = *this;
    for (const auto& [n, t] : other.node_types_) {
      if (const NodeType* mine = out.find_node_type(n)) {
        if (!(*mine == t)) throw TypingError("conflicting declarations of node type '" + n + "'");
        continue;
      }
      out.add_node_type(t);
    }
    for (const auto& [n, t] : other.edge_types_) {
      if (const EdgeType* mine = out.find_edge_type(n)) {
        if (!(*mine == t)) throw TypingError("conflicting declarations of edge type '" + n + "'");
        continue;
      }
      out.add_edge_type(t);
    }
    return out;
  }

  friend bool operator==(const TypeGraph&, const TypeGraph&) = default;

 private:
  void check_fresh(const std::string& name) const {
    if (name.empty()) throw TypingError("empty type name");
    if (node_types_.count(name) || edge_types_.count(name))
      throw TypingError("duplicate type name '" + name + "'");
  }

  std::map<std::string, NodeType> node_types_;
  std::map<std::string, EdgeType> edge_types_;
};

using TypeGraphPtr = std::shared_ptr<const TypeGraph>;

inline bool same_types(const TypeGraphPtr& a, const TypeGraphPtr& b) {
  return a == b || (a && b && *a == *b);
}

// ---------------------------------------------------------------------------
// Typed graphs

struct Node {
  NodeId id;
  std::string type;
  std::map<std::string, AttrTerm> attrs;
  std::string label;

  friend bool operator==(const Node& a, const Node& b) {
    return a.id == b.id && a.type == b.type && a.attrs == b.attrs;
  }
};

struct Edge {
  EdgeId id;
  std::string type;
  NodeId source;
  NodeId target;
  std::string label;

  friend bool operator==(const Edge& a, const Edge& b) {
    return a.id == b.id && a.type == b.type && a.source == b.source && a.target == b.target;
  }
};

/// A graph typed over a shared, immutable type graph. Labels are cosmetic and
/// never take part in equality, matching or isomorphism.
class TypedGraph {
 public:
  TypedGraph() : types_(std::make_shared<TypeGraph>()) {}
  explicit TypedGraph(TypeGraphPtr types) : types_(std::move(types)) {
    if (!types_) throw TypingError("graph without a type graph");
  }

  const TypeGraphPtr& types() const { return types_; }

  NodeId add_node(std::string type, std::map<std::string, AttrTerm> attrs = {},
                  std::string label = {}) {
    NodeId id(next_node_);
    insert_node(Node{id, std::move(type), std::move(attrs), std::move(label)});
    return id;
  }

  /// Inserts a node with a caller-chosen identifier.
  void insert_node(Node n) {
    validate_node(n);
    if (nodes_.count(n.id)) throw TypingError("duplicate node id " + std::to_string(n.id.value));
    next_node_ = std::max(next_node_, n.id.value + 1);
    NodeId id = n.id;
    nodes_.emplace(id, std::move(n));
  }

  EdgeId add_edge(std::string type, NodeId source, NodeId target, std::string label = {}) {
    EdgeId id(next_edge_);
    insert_edge(Edge{id, std::move(type), source, target, std::move(label)});
    return id;
  }

  void insert_edge(Edge e) {
    const EdgeType* et = types_->find_edge_type(e.type);
    if (!et) throw TypingError("undeclared edge type '" + e.type + "'");
    const Node* s = find_node(e.source);
    const Node* t = find_node(e.target);
    if (!s || !t) throw TypingError("edge of type '" + e.type + "' has a missing endpoint");
    if (s->type != et->source || t->type != et->target)
      throw TypingError("edge of type '" + e.type + "' connects " + s->type + " -> " + t->type +
                        ", expected " + et->source + " -> " + et->target);
    if (edges_.count(e.id)) throw TypingError("duplicate edge id " + std::to_string(e.id.value));
    next_edge_ = std::max(next_edge_, e.id.value + 1);
    EdgeId id = e.id;
    edges_.emplace(id, std::move(e));
  }

  /// Removes a node; its incident edges must have been removed already.
  void remove_node(NodeId id) {
    for (const auto& [eid, e] : edges_)
      if (e.source == id || e.target == id)
        throw TypingError("removing node " + std::to_string(id.value) + " would leave a dangling edge");
    nodes_.erase(id);
  }
  void remove_edge(EdgeId id) { edges_.erase(id); }

  void set_attr(NodeId id, const std::string& name, AttrTerm value) {
    Node& n = nodes_.at(id);
    const NodeType* nt = types_->find_node_type(n.type);
    const AttrDecl* decl = nt->find_attr(name);
    if (!decl) throw TypingError("node type '" + n.type + "' has no attribute '" + name + "'");
    check_sort(n.type, *decl, value);
    n.attrs[name] = std::move(value);
  }
  void set_label(NodeId id, std::string label) { nodes_.at(id).label = std::move(label); }
  void set_label(EdgeId id, std::string label) { edges_.at(id).label = std::move(label); }

  const Node& node(NodeId id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw std::out_of_range("no node " + std::to_string(id.value));
    return it->second;
  }
  const Edge& edge(EdgeId id) const {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw std::out_of_range("no edge " + std::to_string(id.value));
    return it->second;
  }
  const Node* find_node(NodeId id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
  }
  const Edge* find_edge(EdgeId id) const {
    auto it = edges_.find(id);
    return it == edges_.end() ? nullptr : &it->second;
  }
  bool has_node(NodeId id) const { return nodes_.count(id) != 0; }
  bool has_edge(EdgeId id) const { return edges_.count(id) != 0; }

  std::optional<NodeId> node_by_label(std::string_view label) const {
    for (const auto& [id, n] : nodes_)
      if (n.label == label) return id;
    return std::nullopt;
  }
  std::optional<EdgeId> edge_by_label(std::string_view label) const {
    for (const auto& [id, e] : edges_)
      if (e.label == label) return id;
    return std::nullopt;
  }

  const std::map<NodeId, Node>& nodes() const { return nodes_; }
  const std::map<EdgeId, Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty() && edges_.empty(); }

  std::vector<EdgeId> incident_edges(NodeId n) const {
    std::vector<EdgeId> out;
    for (const auto& [id, e] : edges_)
      if (e.source == n || e.target == n) out.push_back(id);
    return out;
  }

  /// Next identifiers that add_node / add_edge would hand out.
  std::uint32_t next_node_id() const { return next_node_; }
  std::uint32_t next_edge_id() const { return next_edge_; }

  /// Re-types the graph over a type graph that includes the current one.
  TypedGraph widened(TypeGraphPtr wider) const {
    if (!wider->includes(*types_))
      throw TypingError("cannot widen graph: target type graph does not include the source");
    TypedGraph out = *this;
    out.types_ = std::move(wider);
    return out;
  }

  /// Element-wise equality, ignoring the type graph and labels.
  bool same_elements(const TypedGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

  friend bool operator==(const TypedGraph& a, const TypedGraph& b) {
    return same_types(a.types_, b.types_) && a.same_elements(b);
  }

 private:
  void validate_node(const Node& n) const {
    const NodeType* nt = types_->find_node_type(n.type);
    if (!nt) throw TypingError("undeclared node type '" + n.type + "'");
    if (n.attrs.size() != nt->attrs.size())
      throw TypingError("node of type '" + n.type + "' must value exactly its " +
                        std::to_string(nt->attrs.size()) + " declared attributes");
    for (const auto& decl : nt->attrs) {
      auto it = n.attrs.find(decl.name);
      if (it == n.attrs.end())
        throw TypingError("node of type '" + n.type + "' lacks attribute '" + decl.name + "'");
      check_sort(n.type, decl, it->second);
    }
  }

  static void check_sort(const std::string& type, const AttrDecl& decl, const AttrTerm& t) {
    bool ok = true;
    if (t.is_literal()) ok = sort_of(t.literal()) == decl.sort;
    if (t.is_concat() || t.is_rule_name()) ok = decl.sort == Sort::String;
    if (!ok)
      throw TypingError("attribute '" + type + "." + decl.name + "' expects sort " +
                        std::string(to_string(decl.sort)) + ", got " + to_string(t));
  }

  TypeGraphPtr types_;
  std::map<NodeId, Node> nodes_;
  std::map<EdgeId, Edge> edges_;
  std::uint32_t next_node_ = 0;
  std::uint32_t next_edge_ = 0;
};

inline std::string describe(const TypedGraph& g, NodeId id) {
  const Node& n = g.node(id);
  std::string out = "node " + std::to_string(id.value);
  if (!n.label.empty()) out += " '" + n.label + "'";
  return out + " : " + n.type;
}

inline std::string describe(const TypedGraph& g, EdgeId id) {
  const Edge& e = g.edge(id);
  std::string out = "edge " + std::to_string(id.value);
  if (!e.label.empty()) out += " '" + e.label + "'";
  return out + " : " + e.type;
}

// ---------------------------------------------------------------------------
// Morphisms

/// Identifier mapping between two graphs. The graphs themselves are passed
/// alongside wherever they are needed.
struct GraphMorphism {
  std::map<NodeId, NodeId> nodes;
  std::map<EdgeId, EdgeId> edges;

  NodeId operator()(NodeId n) const { return nodes.at(n); }
  EdgeId operator()(EdgeId e) const { return edges.at(e); }

  bool is_injective() const {
    std::set<NodeId> ns;
    for (const auto& [k, v] : nodes)
      if (!ns.insert(v).second) return false;
    std::set<EdgeId> es;
    for (const auto& [k, v] : edges)
      if (!es.insert(v).second) return false;
    return true;
  }

  static GraphMorphism identity(const TypedGraph& g) {
    GraphMorphism m;
    for (const auto& [id, n] : g.nodes()) m.nodes.emplace(id, id);
    for (const auto& [id, e] : g.edges()) m.edges.emplace(id, id);
    return m;
  }

  /// `this` after `first`, i.e. x -> this(first(x)).
  GraphMorphism after(const GraphMorphism& first) const {
    GraphMorphism out;
    for (const auto& [k, v] : first.nodes) out.nodes.emplace(k, nodes.at(v));
    for (const auto& [k, v] : first.edges) out.edges.emplace(k, edges.at(v));
    return out;
  }

  /// Inverse of an injective morphism (partial on the target).
  GraphMorphism inverse() const {
    GraphMorphism out;
    for (const auto& [k, v] : nodes) out.nodes.emplace(v, k);
    for (const auto& [k, v] : edges) out.edges.emplace(v, k);
    return out;
  }

  friend bool operator==(const GraphMorphism&, const GraphMorphism&) = default;
};

/// Checks totality, type preservation and compatibility with source/target.
inline bool is_morphism(const GraphMorphism& m, const TypedGraph& from, const TypedGraph& to) {
  if (m.nodes.size() != from.node_count() || m.edges.size() != from.edge_count()) return false;
  for (const auto& [id, n] : from.nodes()) {
    auto it = m.nodes.find(id);
    if (it == m.nodes.end()) return false;
    const Node* img = to.find_node(it->second);
    if (!img || img->type != n.type) return false;
  }
  for (const auto& [id, e] : from.edges()) {
    auto it = m.edges.find(id);
    if (it == m.edges.end()) return false;
    const Edge* img = to.find_edge(it->second);
    if (!img || img->type != e.type) return false;
    if (img->source != m.nodes.at(e.source) || img->target != m.nodes.at(e.target)) return false;
  }
  return true;
}

inline void require_same_types(const TypedGraph& a, const TypedGraph& b, std::string_view what) {
  if (!same_types(a.types(), b.types()))
    throw TypingError(std::string(what) + ": graphs are typed over different type graphs");
}

}  // namespace aogg
