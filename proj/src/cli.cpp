#include "ffc/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "ffc/parser.hpp"
#include "ffc/stats.hpp"
#include "json.hpp"

namespace ffc::cli {

using classify::FaultClass;
using dataset::EntryResult;
using nlohmann::ordered_json;

namespace {

/// Domain failure already reported with context; maps to exit code 1.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool color_enabled() {
  const char* v = std::getenv("FFC_COLOR");
  return v && std::string(v) == "1";
}

ordered_json record_json(const EntryResult& r) {
  ordered_json j;
  j["entry"] = r.id;
  j["project"] = r.project;
  if (!r.classes) {
    j["error"] = r.error;
    j["unclassified"] = r.unclassified;
    return j;
  }
  j["classes"] = ordered_json::array();
  for (FaultClass c : r.classes->classes()) j["classes"].push_back(classify::class_name(c));
  j["fault_type"] = r.classes->empty() ? "none" : classify::fault_type_name(classify::fault_type(*r.classes));
  ordered_json ev = ordered_json::object();
  for (FaultClass c : r.classes->classes()) {
    auto it = r.classes->evidence().find(c);
    ev[std::string(classify::class_name(c))] =
        it == r.classes->evidence().end() ? std::vector<std::string>{} : it->second;
  }
  j["evidence"] = ev;
  return j;
}

}  // namespace

std::string emit_report(const std::vector<EntryResult>& results, ReportFormat format, bool color) {
  std::string out;
  switch (format) {
    case ReportFormat::Json:
      for (const EntryResult& r : results) out += record_json(r).dump() + "\n";
      return out;
    case ReportFormat::Csv:
      out = "project,id";
      for (FaultClass c : classify::kAllClasses) out += "," + std::string(classify::class_name(c));
      out += ",fault_type,status\n";
      for (const EntryResult& r : results) {
        out += r.project + "," + r.id;
        for (FaultClass c : classify::kAllClasses) out += r.classes && r.classes->contains(c) ? ",1" : ",0";
        std::string type = r.classes && !r.classes->empty()
                               ? std::string(classify::fault_type_name(classify::fault_type(*r.classes)))
                               : std::string();
        out += "," + type + "," + (r.classes ? "ok" : r.unclassified ? "unclassified" : "error") + "\n";
      }
      return out;
    case ReportFormat::Text: {
      std::ostringstream os;
      for (const EntryResult& r : results) {
        os << r.id << " (" << r.project << "): ";
        if (r.classes) {
          os << r.classes->to_string();
          if (!r.classes->empty()) os << " " << classify::fault_type_name(classify::fault_type(*r.classes));
        } else {
          os << (color ? "\x1b[31m" : "") << (r.unclassified ? "unclassified" : "error")
             << (color ? "\x1b[0m" : "") << ": " << r.error;
        }
        os << "\n";
      }
      return os.str();
    }
  }
  return out;
}

std::vector<EntryResult> parse_report_json(const std::string& text) {
  std::vector<EntryResult> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    EntryResult r;
    r.id = j.at("entry").get<std::string>();
    r.project = j.value("project", std::string());
    if (j.contains("error")) {
      r.error = j.at("error").get<std::string>();
      r.unclassified = j.value("unclassified", false);
    } else {
      classify::FaultClassSet s;
      const auto& ev = j.at("evidence");
      for (const auto& c : j.at("classes")) {
        auto fc = classify::parse_class(c.get<std::string>());
        if (!fc) throw std::runtime_error("unknown fault class " + c.dump());
        s.add(*fc);
        if (ev.contains(c.get<std::string>())) {
          for (const auto& e : ev.at(c.get<std::string>())) s.add(*fc, e.get<std::string>());
        }
      }
      r.classes = s;
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "text") return ReportFormat::Text;
  return ReportFormat::Json;
}

int cmd_parse(const std::string& file, bool emit_ast, std::ostream& out) {
  std::string text = read_text(file);
  minij::Ast ast;
  try {
    ast = minij::parse_source(text);
  } catch (const std::exception& e) {
    throw DomainError(file + ":" + e.what());
  }
  if (emit_ast) {
    out << minij::print_program(ast);
    return 0;
  }
  out << file << ": " << ast.methods.size() << " method" << (ast.methods.size() == 1 ? "" : "s");
  for (const auto& m : ast.methods) out << " " << m.name << "/" << m.params.size();
  out << "\n";
  return 0;
}

int cmd_graph(const std::string& file, const std::string& method, bool dot, std::ostream& out) {
  if (!std::ifstream(file)) throw DomainError(file + ": cannot open file");
  flow::FlowGraph g;
  try {
    g = dataset::load_graph(file, method);
  } catch (const std::exception& e) {
    throw DomainError(e.what());
  }
  out << flow::export_graph(g, dot ? flow::GraphFormat::Dot : flow::GraphFormat::Interchange);
  return 0;
}

std::vector<dataset::FaultEntry> manifest(const std::string& path) {
  try {
    return dataset::load_manifest(path);
  } catch (const std::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

int cmd_classify(const std::string& path, bool emit_alignment, int jobs, const std::string& format,
                 std::ostream& out, std::ostream& err) {
  auto entries = manifest(path);
  auto results = dataset::classify_corpus(entries, {jobs, emit_alignment});
  int code = 0;
  for (const EntryResult& r : results) {
    if (!r.classes) {
      err << "ffc: " << r.id << ": " << r.error << "\n";
      code = 1;
    }
  }
  if (emit_alignment && parse_format(format) == ReportFormat::Json) {
    for (const EntryResult& r : results) {
      ordered_json j = record_json(r);
      if (!r.alignment.empty()) j["alignment"] = nlohmann::json::parse(r.alignment);
      out << j.dump() << "\n";
    }
  } else {
    out << emit_report(results, parse_format(format), color_enabled());
  }
  return code;
}

std::vector<dataset::LabelRow> labels(const std::string& path, const std::string& columns) {
  try {
    dataset::ColumnMap map;
    if (!columns.empty()) map = dataset::ColumnMap::load(columns);
    return dataset::read_labels(path, map);
  } catch (const std::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

int cmd_stats(const std::string& path, bool distribution, bool partition, bool by_project,
              const std::string& columns, std::ostream& out) {
  std::string text = read_text(path);
  if (stats::is_aggregate_csv(text)) {
    if (distribution) throw DomainError(path + ": per-project aggregates carry no per-fault distribution");
    std::vector<stats::AggregateRow> agg;
    try {
      agg = stats::parse_aggregate(text);
    } catch (const std::exception& e) {
      throw DomainError(path + ": " + e.what());
    }
    if (agg.empty()) throw DomainError(path + ": no rows");
    std::vector<stats::FrequencyRow> rows;
    if (by_project) {
      for (const auto& a : agg) rows.push_back(stats::to_frequency_row(a));
    }
    rows.push_back(stats::pool(agg));
    out << (partition ? stats::partition_csv(rows) : stats::frequency_csv(rows));
    return 0;
  }
  auto rows = labels(path, columns);
  if (rows.empty()) throw DomainError(path + ": no label rows");
  if (distribution) {
    out << stats::distribution_csv(stats::distribution(rows, by_project));
    return 0;
  }
  auto freq = stats::frequencies(rows, by_project);
  out << (partition ? stats::partition_csv(freq) : stats::frequency_csv(freq));
  return 0;
}

int cmd_cooccur(const std::string& path, const std::string& columns, std::ostream& out) {
  auto rows = labels(path, columns);
  if (rows.empty()) throw DomainError(path + ": no label rows");
  out << stats::cooccurrence_csv(stats::cooccurrence(rows));
  return 0;
}

int cmd_compare(const std::string& mpath, const std::string& lpath, const std::string& columns, int jobs,
                const std::string& format, std::ostream& out) {
  auto entries = manifest(mpath);
  auto ref = labels(lpath, columns);
  auto report = dataset::compare(entries, ref, jobs);
  if (format == "text") out << dataset::agreement_summary(report, color_enabled());
  else out << dataset::agreement_csv(report);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flow-graph fault classification toolkit", "ffc"};
  app.require_subcommand(1);

  std::string file, method, manifest_path, labels_path, columns, format = "json";
  bool emit_ast = false, dot = false, interchange = false, emit_alignment = false;
  bool table1 = false, distribution = false, partition = false, by_project = false;
  int jobs = 1;

  auto* parse = app.add_subcommand("parse", "Parse a MiniJ source file");
  parse->add_option("file", file, "MiniJ source")->required();
  parse->add_flag("--emit-ast", emit_ast, "Print the canonical program");

  auto* graph = app.add_subcommand("graph", "Export the flow graph of one method");
  graph->add_option("file", file, "MiniJ source or interchange JSON")->required();
  graph->add_option("--method", method, "Method name")->required();
  auto* dot_flag = graph->add_flag("--dot", dot, "Graphviz output");
  auto* ic_flag = graph->add_flag("--interchange", interchange, "Interchange JSON (default)");
  dot_flag->excludes(ic_flag);

  auto* cls = app.add_subcommand("classify", "Classify every entry of a manifest");
  cls->add_option("--manifest", manifest_path, "Manifest JSON")->required();
  cls->add_flag("--emit-alignment", emit_alignment, "Include node alignments");
  cls->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  cls->add_option("--format", format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));

  auto* st = app.add_subcommand("stats", "Frequency table, type partition or distribution");
  st->add_option("--labels", labels_path, "Label CSV or per-project aggregate CSV")->required();
  auto* t1 = st->add_flag("--table1", table1, "Frequency table (default)");
  auto* dist = st->add_flag("--distribution", distribution, "Classes-per-fault distribution");
  auto* part = st->add_flag("--partition", partition, "Fault-type percentages");
  t1->excludes(dist);
  t1->excludes(part);
  dist->excludes(part);
  st->add_flag("--by-project", by_project, "One row per project before the overall row");
  st->add_option("--columns", columns, "Column-name map (JSON) for external label files");

  auto* co = app.add_subcommand("cooccur", "Class co-occurrence matrix");
  co->add_option("--labels", labels_path, "Label CSV")->required();
  co->add_option("--columns", columns, "Column-name map (JSON)");

  auto* cmp = app.add_subcommand("compare", "Agreement between classifier output and reference labels");
  cmp->add_option("--manifest", manifest_path, "Manifest JSON")->required();
  cmp->add_option("--labels", labels_path, "Reference label CSV")->required();
  cmp->add_option("--columns", columns, "Column-name map (JSON)");
  cmp->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  std::string cmp_format = "csv";
  cmp->add_option("--format", cmp_format, "csv or text")->check(CLI::IsMember({"csv", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*parse) return cmd_parse(file, emit_ast, out);
    if (*graph) return cmd_graph(file, method, dot, out);
    if (*cls) return cmd_classify(manifest_path, emit_alignment, jobs, format, out, err);
    if (*st) return cmd_stats(labels_path, distribution, partition, by_project, columns, out);
    if (*co) return cmd_cooccur(labels_path, columns, out);
    if (*cmp) return cmd_compare(manifest_path, labels_path, columns, jobs, cmp_format, out);
  } catch (const std::exception& e) {
    err << "ffc: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace ffc::cli
