#pragma once

// Schema-versioned JSON reports and plain-text tables.

#include "aogg/cpa.hpp"

#include <iomanip>
#include <json.hpp>

namespace aogg {

inline constexpr int kReportSchemaVersion = 1;

/// Serializable report: a kind tag and a JSON body.
struct ReportDoc {
  int schema_version = kReportSchemaVersion;
  std::string kind;  // "cpa", "trace", "weave", "commute"
  nlohmann::json body = nlohmann::json::object();

  bool operator==(const ReportDoc&) const = default;

  std::string dump() const {
    nlohmann::json j{{"schema_version", schema_version}, {"kind", kind}, {"body", body}};
    return j.dump(2) + "\n";
  }

  static ReportDoc parse(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ReportDoc d;
    d.schema_version = j.at("schema_version").get<int>();
    if (d.schema_version != kReportSchemaVersion)
      throw std::runtime_error("unsupported report schema version " + std::to_string(d.schema_version));
    d.kind = j.at("kind").get<std::string>();
    d.body = j.at("body");
    return d;
  }
};

// ---------------------------------------------------------------------------
// Graphs

inline nlohmann::json graph_to_json(const TypedGraph& g) {
  nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
  for (const auto& [id, n] : g.nodes()) {
    nlohmann::json attrs = nlohmann::json::object();
    for (const auto& [a, t] : n.attrs) attrs[a] = to_string(t);
    nodes.push_back({{"id", id.value}, {"type", n.type}, {"label", n.label}, {"attrs", attrs}});
  }
  for (const auto& [id, e] : g.edges())
    edges.push_back({{"id", id.value},
                     {"type", e.type},
                     {"label", e.label},
                     {"source", e.source.value},
                     {"target", e.target.value}});
  return {{"nodes", nodes}, {"edges", edges}};
}

inline TypedGraph graph_from_json(const nlohmann::json& j, const TypeGraphPtr& types) {
  TypedGraph g(types);
  for (const auto& n : j.at("nodes")) {
    Node node{NodeId(n.at("id").get<std::uint32_t>()), n.at("type").get<std::string>(), {},
              n.at("label").get<std::string>()};
    for (const auto& [a, t] : n.at("attrs").items()) node.attrs.emplace(a, parse_term(t.get<std::string>()));
    g.insert_node(std::move(node));
  }
  for (const auto& e : j.at("edges"))
    g.insert_edge(Edge{EdgeId(e.at("id").get<std::uint32_t>()), e.at("type").get<std::string>(),
                       NodeId(e.at("source").get<std::uint32_t>()), NodeId(e.at("target").get<std::uint32_t>()),
                       e.at("label").get<std::string>()});
  return g;
}

// ---------------------------------------------------------------------------
// CPA

inline nlohmann::json matrix_to_json(const CpaMatrix& m) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& a : m.rules)
    for (const auto& b : m.rules) {
      auto it = m.cells.find({a, b});
      if (it == m.cells.end()) continue;
      nlohmann::json pairs = nlohmann::json::array();
      for (const auto& cp : it->second) {
        nlohmann::json kinds = nlohmann::json::array(), nodes = nlohmann::json::array(),
                       edges = nlohmann::json::array();
        for (PairKind k : cp.kinds) kinds.push_back(std::string(to_string(k)));
        for (const auto& [x, y] : cp.overlap.nodes) nodes.push_back({x.value, y.value});
        for (const auto& [x, y] : cp.overlap.edges) edges.push_back({x.value, y.value});
        pairs.push_back({{"kinds", kinds},
                         {"witnesses", cp.witnesses},
                         {"overlap", {{"nodes", nodes}, {"edges", edges}}}});
      }
      cells.push_back({{"first", a}, {"second", b}, {"count", it->second.size()}, {"pairs", pairs}});
    }
  return {{"rules", m.rules}, {"cells", cells}, {"truncated", m.truncated}};
}

inline PairKind pair_kind_from_string(const std::string& s) {
  for (PairKind k : {PairKind::DeleteUse, PairKind::AttrWriteRead, PairKind::AttrWriteWrite, PairKind::ProduceUse})
    if (to_string(k) == s) return k;
  throw std::runtime_error("unknown critical pair kind '" + s + "'");
}

inline CpaMatrix matrix_from_json(const nlohmann::json& j) {
  CpaMatrix m;
  m.rules = j.at("rules").get<std::vector<std::string>>();
  m.truncated = j.at("truncated").get<bool>();
  for (const auto& c : j.at("cells")) {
    auto& cell = m.cells[{c.at("first").get<std::string>(), c.at("second").get<std::string>()}];
    for (const auto& p : c.at("pairs")) {
      CriticalPair cp;
      cp.first = c.at("first").get<std::string>();
      cp.second = c.at("second").get<std::string>();
      for (const auto& k : p.at("kinds")) cp.kinds.insert(pair_kind_from_string(k.get<std::string>()));
      cp.witnesses = p.at("witnesses").get<std::vector<std::string>>();
      for (const auto& n : p.at("overlap").at("nodes"))
        cp.overlap.nodes.emplace_back(NodeId(n[0].get<std::uint32_t>()), NodeId(n[1].get<std::uint32_t>()));
      for (const auto& e : p.at("overlap").at("edges"))
        cp.overlap.edges.emplace_back(EdgeId(e[0].get<std::uint32_t>()), EdgeId(e[1].get<std::uint32_t>()));
      cell.push_back(std::move(cp));
    }
  }
  return m;
}

/// `mode` selects "conflicts", "dependencies" or "both".
inline ReportDoc cpa_report_doc(const CpaReport& r, const std::string& mode, bool weaving, bool timestamps = false) {
  ReportDoc d;
  d.kind = "cpa";
  d.body["level"] = weaving ? "weaving" : "base";
  d.body["mode"] = mode;
  if (mode != "dependencies") d.body["conflicts"] = matrix_to_json(r.conflicts);
  if (mode != "conflicts") d.body["dependencies"] = matrix_to_json(r.dependencies);
  if (weaving) {
    Interference inter = cross_aspect_interference(r);
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& [k, a, b] : inter.cells) cells.push_back({{"matrix", k}, {"first", a}, {"second", b}});
    d.body["interference"] = {{"order_independent", inter.order_independent}, {"cells", cells}};
  }
  if (timestamps) d.body["seconds"] = r.seconds;
  return d;
}

inline CpaReport cpa_report_from_doc(const ReportDoc& d) {
  if (d.kind != "cpa") throw std::runtime_error("not a cpa report");
  CpaReport r;
  if (d.body.contains("conflicts")) r.conflicts = matrix_from_json(d.body.at("conflicts"));
  if (d.body.contains("dependencies")) r.dependencies = matrix_from_json(d.body.at("dependencies"));
  if (d.body.contains("seconds")) r.seconds = d.body.at("seconds").get<double>();
  return r;
}

/// Fixed-width matrix: rows are the first rule, columns the second.
inline std::string matrix_table(const CpaMatrix& m, const std::string& title) {
  std::ostringstream os;
  os << title << "\n";
  std::size_t w = 4;
  for (const auto& r : m.rules) w = std::max(w, r.size());
  os << std::left << std::setw(static_cast<int>(w)) << "" << " ";
  for (std::size_t j = 0; j < m.rules.size(); ++j) os << " " << std::right << std::setw(4) << ("r" + std::to_string(j + 1));
  os << "\n";
  for (std::size_t i = 0; i < m.rules.size(); ++i) {
    os << std::left << std::setw(static_cast<int>(w)) << m.rules[i] << " ";
    for (const auto& b : m.rules) os << " " << std::right << std::setw(4) << m.count(m.rules[i], b);
    os << "\n";
  }
  for (std::size_t j = 0; j < m.rules.size(); ++j) os << "  r" << j + 1 << " = " << m.rules[j] << "\n";
  if (m.truncated) os << "  (overlap enumeration truncated)\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Traces

inline ReportDoc trace_report_doc(const DerivationTrace& t, std::uint64_t seed) {
  ReportDoc d;
  d.kind = "trace";
  d.body["seed"] = seed;
  d.body["status"] = std::string(to_string(t.status));
  d.body["initial_hash"] = t.initial_hash;
  d.body["initial_snapshot"] = t.initial_snapshot ? graph_to_json(*t.initial_snapshot) : nlohmann::json(nullptr);
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : t.steps) {
    nlohmann::json match = nlohmann::json::object();
    for (const auto& [l, h] : s.match) match[l] = h;
    steps.push_back({{"index", s.index},
                     {"rule", s.rule},
                     {"reflected_name", s.reflected_name},
                     {"match", match},
                     {"hash", s.hash},
                     {"snapshot", s.snapshot ? graph_to_json(*s.snapshot) : nlohmann::json(nullptr)}});
  }
  d.body["steps"] = steps;
  d.body["final_graph"] = graph_to_json(t.final_graph);
  return d;
}

inline DerivationTrace trace_from_doc(const ReportDoc& d, const TypeGraphPtr& types) {
  if (d.kind != "trace") throw std::runtime_error("not a trace report");
  DerivationTrace t;
  const auto& b = d.body;
  t.status = b.at("status").get<std::string>() == "stopped-no-match" ? DerivationTrace::Status::StoppedNoMatch
                                                                     : DerivationTrace::Status::StoppedStepLimit;
  t.initial_hash = b.at("initial_hash").get<std::uint64_t>();
  if (!b.at("initial_snapshot").is_null()) t.initial_snapshot = graph_from_json(b.at("initial_snapshot"), types);
  for (const auto& s : b.at("steps")) {
    TraceStep ts;
    ts.index = s.at("index").get<std::size_t>();
    ts.rule = s.at("rule").get<std::string>();
    ts.reflected_name = s.at("reflected_name").get<std::string>();
    for (const auto& [l, h] : s.at("match").items()) ts.match[l] = h.get<std::uint32_t>();
    ts.hash = s.at("hash").get<std::uint64_t>();
    if (!s.at("snapshot").is_null()) ts.snapshot = graph_from_json(s.at("snapshot"), types);
    t.steps.push_back(std::move(ts));
  }
  t.final_graph = graph_from_json(b.at("final_graph"), types);
  return t;
}

}  // namespace aogg
