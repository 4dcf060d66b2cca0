#include "ffc/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <omp.h>

#include "ffc/parser.hpp"
#include "json.hpp"

namespace ffc::dataset {

using classify::FaultClass;
using classify::FaultClassSet;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line, int lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw LabelError(lineno, "unterminated quote");
  out.push_back(std::move(cur));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

// ---- manifest --------------------------------------------------------------

ManifestError::ManifestError(std::string e, std::string f, std::string message)
    : std::runtime_error("manifest entry " + (e.empty() ? std::string("?") : e) + ", field \"" + f +
                         "\": " + message),
      entry(std::move(e)),
      field(std::move(f)) {}

std::vector<FaultEntry> parse_manifest(const std::string& text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ManifestError("", "(document)", e.what());
  }
  if (!j.is_array()) throw ManifestError("", "(document)", "expected a JSON list of entries");
  std::vector<FaultEntry> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t index = 0;
  for (const json& je : j) {
    std::string label = "#" + std::to_string(index++);
    auto str = [&](const char* key) -> std::string {
      if (!je.is_object() || !je.contains(key) || !je.at(key).is_string()) {
        throw ManifestError(label, key, "missing or not a string");
      }
      return je.at(key).get<std::string>();
    };
    FaultEntry e;
    e.id = str("id");
    label = e.id;
    e.project = str("project");
    e.method = str("method");
    e.faulty = base_dir / str("faulty");
    e.fixed = base_dir / str("fixed");
    if (!fs::exists(e.faulty)) throw ManifestError(e.id, "faulty", "file not found: " + e.faulty.string());
    if (!fs::exists(e.fixed)) throw ManifestError(e.id, "fixed", "file not found: " + e.fixed.string());
    if (je.contains("expected")) {
      if (!je.at("expected").is_array()) throw ManifestError(e.id, "expected", "expected a list of class names");
      FaultClassSet s;
      for (const json& c : je.at("expected")) {
        auto fc = c.is_string() ? classify::parse_class(c.get<std::string>()) : std::nullopt;
        if (!fc) throw ManifestError(e.id, "expected", "unknown fault class " + c.dump());
        s.add(*fc);
      }
      e.expected = s;
    }
    if (!seen.emplace(e.project, e.id).second) throw ManifestError(e.id, "id", "duplicate entry");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<FaultEntry> load_manifest(const fs::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw ManifestError("", "(document)", e.what());
  }
  return parse_manifest(text, path.parent_path());
}

flow::FlowGraph load_graph(const fs::path& path, const std::string& method) {
  std::string text = read_file(path);
  try {
    if (path.extension() == ".json") return flow::import_graph(text);
    return flow::build_flow_graph(minij::parse_source(text), method);
  } catch (const std::exception& e) {
    throw std::runtime_error(path.string() + ":" + e.what());
  }
}

// ---- labels ----------------------------------------------------------------

LabelError::LabelError(int l, std::string message)
    : std::runtime_error("line " + std::to_string(l) + ": " + message), line(l) {}

ColumnMap ColumnMap::load(const fs::path& config) {
  json j;
  try {
    j = json::parse(read_file(config));
  } catch (const json::exception& e) {
    throw std::runtime_error("column map " + config.string() + ": " + e.what());
  }
  ColumnMap m;
  for (const auto& [k, v] : j.items()) m.names[k] = v.get<std::string>();
  return m;
}

std::string ColumnMap::column(const std::string& ours) const {
  auto it = names.find(ours);
  return it == names.end() ? ours : it->second;
}

std::vector<LabelRow> parse_labels(const std::string& text, const ColumnMap& columns) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, std::size_t> header;
  std::vector<LabelRow> rows;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line, lineno);
    if (header.empty()) {
      for (std::size_t i = 0; i < fields.size(); ++i) header[fields[i]] = i;
      width = fields.size();
      std::vector<std::string> needed{"project", "id"};
      for (FaultClass c : classify::kAllClasses) needed.emplace_back(classify::class_name(c));
      for (const auto& n : needed) {
        if (!header.count(columns.column(n))) throw LabelError(lineno, "missing column " + columns.column(n));
      }
      continue;
    }
    if (fields.size() != width) throw LabelError(lineno, "expected " + std::to_string(width) + " fields");
    LabelRow row;
    row.project = fields[header.at(columns.column("project"))];
    row.id = fields[header.at(columns.column("id"))];
    for (FaultClass c : classify::kAllClasses) {
      const std::string& v = fields[header.at(columns.column(std::string(classify::class_name(c))))];
      if (v == "1") row.classes.add(c);
      else if (v != "0") throw LabelError(lineno, "flag " + std::string(classify::class_name(c)) + " must be 0 or 1");
    }
    if (row.classes.empty()) throw LabelError(lineno, "row " + row.id + " has no fault class");
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw LabelError(0, "missing header");
  return rows;
}

std::string format_labels(const std::vector<LabelRow>& rows) {
  std::string out = "project,id";
  for (FaultClass c : classify::kAllClasses) out += "," + std::string(classify::class_name(c));
  out += "\n";
  for (const LabelRow& r : rows) {
    out += csv_field(r.project) + "," + csv_field(r.id);
    for (FaultClass c : classify::kAllClasses) out += r.classes.contains(c) ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

std::vector<LabelRow> read_labels(const fs::path& path, const ColumnMap& columns) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw LabelError(0, e.what());
  }
  return parse_labels(text, columns);
}

void write_labels(const std::vector<LabelRow>& rows, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_labels(rows);
}

// ---- classification --------------------------------------------------------

EntryResult classify_entry(const FaultEntry& e, bool emit_alignment) {
  EntryResult r;
  r.project = e.project;
  r.id = e.id;
  try {
    flow::FlowGraph f = load_graph(e.faulty, e.method);
    flow::FlowGraph g = load_graph(e.fixed, e.method);
    align::Alignment a = align::align(f, g);
    if (emit_alignment) r.alignment = align::alignment_json(f, g, a);
    r.classes = classify::classify(f, g, a);
  } catch (const classify::UnclassifiedDiff& ex) {
    r.unclassified = true;
    r.error = ex.what();
  } catch (const std::exception& ex) {
    r.error = ex.what();
  }
  return r;
}

namespace {

void order_results(std::vector<EntryResult>& results) {
  std::stable_sort(results.begin(), results.end(),
                   [](const EntryResult& a, const EntryResult& b) { return a.id < b.id; });
}

}  // namespace

std::vector<EntryResult> classify_corpus_serial(const std::vector<FaultEntry>& entries, const CorpusOptions& opt) {
  std::vector<EntryResult> results;
  results.reserve(entries.size());
  for (const FaultEntry& e : entries) results.push_back(classify_entry(e, opt.emit_alignment));
  order_results(results);
  return results;
}

std::vector<EntryResult> classify_corpus(const std::vector<FaultEntry>& entries, const CorpusOptions& opt) {
  std::vector<EntryResult> results(entries.size());
  const long n = static_cast<long>(entries.size());
  const int jobs = std::max(1, opt.jobs);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (long i = 0; i < n; ++i) results[i] = classify_entry(entries[i], opt.emit_alignment);
  order_results(results);
  return results;
}

// ---- agreement -------------------------------------------------------------

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::Exact: return "exact";
    case Relation::Superset: return "superset";
    case Relation::Subset: return "subset";
    case Relation::Overlap: return "overlap";
    case Relation::Disjoint: return "disjoint";
    case Relation::Unclassified: return "unclassified";
    case Relation::Error: return "error";
  }
  return "?";
}

Relation relate(const FaultClassSet& expected, const FaultClassSet& actual) {
  if (actual.empty()) return Relation::Unclassified;
  if (actual == expected) return Relation::Exact;
  if (expected.is_subset_of(actual)) return Relation::Superset;
  if (actual.is_subset_of(expected)) return Relation::Subset;
  if (!(actual & expected).empty()) return Relation::Overlap;
  return Relation::Disjoint;
}

std::size_t AgreementReport::exact_or_superset() const {
  auto get = [&](Relation r) {
    auto it = counts.find(r);
    return it == counts.end() ? std::size_t{0} : it->second;
  };
  return get(Relation::Exact) + get(Relation::Superset);
}

AgreementReport compare(const std::vector<EntryResult>& results, const std::vector<LabelRow>& reference) {
  std::map<std::pair<std::string, std::string>, const LabelRow*> ref;
  for (const LabelRow& r : reference) ref[{r.project, r.id}] = &r;
  AgreementReport report;
  for (std::size_t i = 0; i < kRelationCount; ++i) report.counts[static_cast<Relation>(i)] = 0;
  for (const EntryResult& res : results) {
    Agreement a;
    a.project = res.project;
    a.id = res.id;
    a.actual = res.classes;
    auto it = ref.find({res.project, res.id});
    if (it != ref.end()) a.expected = it->second->classes;
    if (!a.expected) {
      a.relation = Relation::Error;
      a.note = "no reference row";
    } else if (res.unclassified) {
      a.relation = Relation::Unclassified;
      a.note = res.error;
    } else if (!res.classes) {
      a.relation = Relation::Error;
      a.note = res.error;
    } else {
      a.relation = relate(*a.expected, *res.classes);
    }
    ++report.counts[a.relation];
    report.entries.push_back(std::move(a));
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const Agreement& x, const Agreement& y) { return x.id < y.id; });
  return report;
}

AgreementReport compare(const std::vector<FaultEntry>& entries, const std::vector<LabelRow>& reference, int jobs) {
  return compare(classify_corpus(entries, {jobs, false}), reference);
}

std::string agreement_csv(const AgreementReport& r) {
  std::string out = "project,id,expected,actual,relation\n";
  auto set_text = [](const std::optional<FaultClassSet>& s) {
    if (!s) return std::string();
    std::string t;
    for (FaultClass c : s->classes()) {
      if (!t.empty()) t += ' ';
      t += classify::class_name(c);
    }
    return t;
  };
  for (const Agreement& a : r.entries) {
    out += csv_field(a.project) + "," + csv_field(a.id) + "," + csv_field(set_text(a.expected)) + "," +
           csv_field(set_text(a.actual)) + "," + std::string(relation_name(a.relation)) + "\n";
  }
  return out;
}

std::string agreement_summary(const AgreementReport& r, bool color) {
  auto paint = [&](Relation rel, std::string_view s) {
    if (!color) return std::string(s);
    const char* code = rel == Relation::Exact || rel == Relation::Superset ? "\x1b[32m"
                       : rel == Relation::Error || rel == Relation::Unclassified ? "\x1b[31m"
                                                                                 : "\x1b[33m";
    return std::string(code) + std::string(s) + "\x1b[0m";
  };
  std::ostringstream os;
  for (const Agreement& a : r.entries) {
    os << a.id << ": expected " << (a.expected ? a.expected->to_string() : "-") << ", actual "
       << (a.actual ? a.actual->to_string() : "-") << " -> " << paint(a.relation, relation_name(a.relation));
    if (!a.note.empty()) os << " (" << a.note << ")";
    os << "\n";
  }
  os << r.entries.size() << " entries:";
  for (const auto& [rel, n] : r.counts) os << " " << relation_name(rel) << "=" << n;
  os << "\n";
  return os.str();
}

}  // namespace ffc::dataset
