#pragma once

// Command-line surface. Kept in a header so tests can drive it directly.

#include "aogg/dot.hpp"
#include "aogg/format.hpp"
#include "aogg/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>

namespace aogg {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInvalid = 2, kExitInterference = 3 };

inline constexpr const char* kOverlapBoundEnv = "AOGG_OVERLAP_BOUND";

namespace detail {

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

inline std::size_t overlap_bound(std::optional<std::size_t> flag, const RunConfig& cfg) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kOverlapBoundEnv)) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(kOverlapBoundEnv) + " must be a non-negative integer");
    }
  }
  return cfg.overlap_bound;
}

}  // namespace detail

/// Runs the tool on `args` (without the program name). Returns the exit code.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aspect-oriented graph grammars: validate, run, weave, encode and analyze", "aogg"};
  app.require_subcommand(1);
  bool timestamps = false;
  app.add_flag("--timestamps", timestamps, "Include wall-clock timings in output");

  std::string file;
  auto* validate = app.add_subcommand("validate", "Parse and validate a grammar file");
  validate->add_option("file", file, "Grammar file")->required();
  std::string dot_out;
  validate->add_option("--dot", dot_out, "Write the initial graph as DOT");

  auto* run = app.add_subcommand("run", "Execute the base grammar with all aspects woven");
  run->add_option("file", file, "Grammar file")->required();
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_steps;
  std::string trace_out;
  bool unwoven = false;
  run->add_option("--seed", seed, "Random seed (default: config)");
  run->add_option("--max-steps", max_steps, "Step limit (default: config)");
  run->add_option("--trace", trace_out, "Write the derivation trace as JSON");
  run->add_flag("--base", unwoven, "Run the base grammar without weaving");

  auto* weave = app.add_subcommand("weave", "Weave aspects into the base grammar");
  weave->add_option("file", file, "Grammar file")->required();
  std::string order, output;
  weave->add_option("--order", order, "Comma-separated aspect order (default: file order)");
  weave->add_option("-o,--output", output, "Output grammar file (default: stdout)");

  auto* encode = app.add_subcommand("encode", "Emit the encoded grammar (rules as graphs, advices as rules)");
  encode->add_option("file", file, "Grammar file")->required();
  encode->add_option("-o,--output", output, "Output file (default: stdout)");
  bool as_dot = false;
  encode->add_flag("--dot", as_dot, "Emit the encoded base grammar as DOT instead");

  auto* cpa = app.add_subcommand("cpa", "Critical pair analysis");
  cpa->add_option("file", file, "Grammar file")->required();
  std::string mode = "conflicts", format = "table";
  bool weaving = false, strict = false;
  std::optional<std::size_t> bound;
  cpa->add_option("--mode", mode, "conflicts, dependencies or both")
      ->check(CLI::IsMember({"conflicts", "dependencies", "both"}));
  cpa->add_option("--format", format, "json or table")->check(CLI::IsMember({"json", "table"}));
  cpa->add_flag("--weaving", weaving, "Analyze the encoded advices instead of the base rules");
  cpa->add_flag("--strict", strict, "With --weaving: exit 3 on cross-aspect interference");
  cpa->add_option("--bound", bound, std::string("Overlaps examined per rule pair (also ") + kOverlapBoundEnv + ")");

  auto* commute = app.add_subcommand("commute", "Compare all aspect weaving orders");
  commute->add_option("file", file, "Grammar file")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  auto emit = [&](const std::string& text) {
    if (output.empty())
      out << text;
    else
      detail::write_text(output, text);
  };

  Loaded loaded;
  try {
    loaded = load_grammar_file(file);
  } catch (const ParseError& e) {
    err << file << ": " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  }
  const AOGG& d = loaded.aogg;

  try {
    if (validate->parsed()) {
      std::size_t advices = 0;
      for (const auto& a : d.aspects) advices += a.advices.size();
      out << "ok: grammar " << loaded.name << ": " << d.base.rules.size() << " rules, " << d.aspects.size()
          << " aspects, " << advices << " advices\n";
      if (!dot_out.empty()) detail::write_text(dot_out, export_dot(d.base.initial, loaded.name));
    } else if (run->parsed()) {
      Grammar g = unwoven ? d.base : weave_all(d);
      RunOptions opt{loaded.config.injective, loaded.config.snapshot_threshold};
      const std::uint64_t s = seed.value_or(loaded.config.seed);
      DerivationTrace trace = run_grammar(g, s, max_steps.value_or(loaded.config.max_steps), opt);
      for (const auto& st : trace.steps) out << "step " << st.index << ": " << st.rule << "\n";
      out << "status: " << to_string(trace.status) << ", steps: " << trace.steps.size()
          << ", final hash: " << trace.final_graph.node_count() << " nodes/" << trace.final_graph.edge_count()
          << " edges/" << std::hex << content_hash(trace.final_graph) << std::dec << "\n";
      if (!trace_out.empty()) detail::write_text(trace_out, trace_report_doc(trace, s).dump());
    } else if (weave->parsed()) {
      AOGG ordered = order.empty() ? d : reordered(d, detail::split_list(order));
      Grammar g = weave_all(ordered);
      emit(print_grammar(g, loaded.name + "_woven"));
      if (!output.empty()) out << "woven " << g.rules.size() << " rules into " << output << "\n";
    } else if (encode->parsed()) {
      if (as_dot) {
        emit(export_dot(encode_grammar(extended_base(d)), loaded.name + "_encoded"));
      } else {
        Grammar g = encode_aogg(d);
        emit(print_grammar(g, loaded.name + "_encoded"));
        if (!output.empty())
          out << "encoded " << d.base.rules.size() << " rules and " << g.rules.size() << " advices into " << output
              << "\n";
      }
    } else if (cpa->parsed()) {
      CpaOptions opt{detail::overlap_bound(bound, loaded.config)};
      CpaReport report = weaving ? analyze_weaving(d, opt) : analyze(d.base.rules, opt);
      if (format == "json") {
        out << cpa_report_doc(report, mode, weaving, timestamps).dump();
      } else {
        if (mode != "dependencies") out << matrix_table(report.conflicts, "conflicts");
        if (mode == "both") out << "\n";
        if (mode != "conflicts") out << matrix_table(report.dependencies, "dependencies");
        if (weaving) {
          Interference inter = cross_aspect_interference(report);
          if (inter.order_independent) {
            out << "no cross-aspect interference: weaving order does not matter\n";
          } else {
            for (const auto& [k, a, b] : inter.cells) out << "interference (" << k << "): " << a << " -> " << b << "\n";
          }
        }
        if (timestamps) out << "elapsed: " << elapsed() << " s\n";
      }
      if (weaving && strict && !cross_aspect_interference(report).order_independent) return kExitInterference;
    } else if (commute->parsed()) {
      std::vector<std::string> names;
      for (const auto& a : d.aspects) names.push_back(a.name);
      std::sort(names.begin(), names.end());
      const Grammar first = weave_all(reordered(d, names));
      const std::vector<std::string> first_order = names;
      std::size_t orders = 1;
      while (std::next_permutation(names.begin(), names.end())) {
        ++orders;
        if (!grammars_isomorphic(first, weave_all(reordered(d, names)))) {
          out << "orders disagree: [" << detail::join(first_order, ", ") << "] vs [" << detail::join(names, ", ")
              << "]\n";
          return kExitInterference;
        }
      }
      out << "orders agree: " << orders << " weaving orders, " << first.rules.size() << " rules each\n";
      if (timestamps) out << "elapsed: " << elapsed() << " s\n";
    }
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  if (timestamps && !cpa->parsed() && !commute->parsed()) out << "elapsed: " << elapsed() << " s\n";
  return kExitOk;
}

inline int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace aogg
