// Fault-entry corpora, label files and agreement against reference labels.
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffc/classifier.hpp"
#include "ffc/flowgraph.hpp"

namespace ffc::dataset {

namespace fs = std::filesystem;

struct FaultEntry {
  std::string project;
  std::string id;
  fs::path faulty;  // .mj source or interchange .json
  fs::path fixed;
  std::string method;
  std::optional<classify::FaultClassSet> expected;
};

class ManifestError : public std::runtime_error {
 public:
  ManifestError(std::string entry, std::string field, std::string message);
  std::string entry;
  std::string field;
};

/// JSON list of {"project","id","faulty","fixed","method","expected"?}.
/// Paths are resolved against the manifest's directory.
std::vector<FaultEntry> load_manifest(const fs::path& path);
std::vector<FaultEntry> parse_manifest(const std::string& text, const fs::path& base_dir);

/// Flow graph of one side: interchange JSON when the file ends in .json,
/// otherwise MiniJ source restricted to `method`.
flow::FlowGraph load_graph(const fs::path& path, const std::string& method);

// ---- labels ----------------------------------------------------------------

struct LabelRow {
  std::string project;
  std::string id;
  classify::FaultClassSet classes;

  bool operator==(const LabelRow&) const = default;
};

class LabelError : public std::runtime_error {
 public:
  LabelError(int line, std::string message);
  int line;
};

/// Maps our column names (project, id, order, ..., use) to the header names
/// used by an external label file. Missing keys map to themselves.
struct ColumnMap {
  std::map<std::string, std::string> names;

  static ColumnMap load(const fs::path& config);  // JSON object
  std::string column(const std::string& ours) const;
};

std::vector<LabelRow> parse_labels(const std::string& text, const ColumnMap& columns = {});
std::string format_labels(const std::vector<LabelRow>& rows);
std::vector<LabelRow> read_labels(const fs::path& path, const ColumnMap& columns = {});
void write_labels(const std::vector<LabelRow>& rows, const fs::path& path);

// ---- classification and agreement ------------------------------------------

struct EntryResult {
  std::string project;
  std::string id;
  std::optional<classify::FaultClassSet> classes;  // set when classified
  bool unclassified = false;                       // UnclassifiedDiff raised
  std::string error;                               // load/parse failure or UnclassifiedDiff text
  std::string alignment;                           // JSON, when requested
};

struct CorpusOptions {
  int jobs = 1;
  bool emit_alignment = false;
};

EntryResult classify_entry(const FaultEntry& e, bool emit_alignment = false);

/// Per-entry classification fanned out over OpenMP threads. Results are in
/// entry-id order regardless of scheduling.
std::vector<EntryResult> classify_corpus(const std::vector<FaultEntry>& entries, const CorpusOptions& opt = {});

/// Single-threaded reference for classify_corpus.
std::vector<EntryResult> classify_corpus_serial(const std::vector<FaultEntry>& entries,
                                                const CorpusOptions& opt = {});

enum class Relation { Exact, Superset, Subset, Overlap, Disjoint, Unclassified, Error };

inline constexpr std::size_t kRelationCount = 7;
std::string_view relation_name(Relation r);

/// actual vs expected class sets.
Relation relate(const classify::FaultClassSet& expected, const classify::FaultClassSet& actual);

struct Agreement {
  std::string project;
  std::string id;
  std::optional<classify::FaultClassSet> expected;
  std::optional<classify::FaultClassSet> actual;
  Relation relation = Relation::Error;
  std::string note;
};

struct AgreementReport {
  std::vector<Agreement> entries;  // sorted by id
  std::map<Relation, std::size_t> counts;

  std::size_t exact_or_superset() const;
};

AgreementReport compare(const std::vector<EntryResult>& results, const std::vector<LabelRow>& reference);
AgreementReport compare(const std::vector<FaultEntry>& entries, const std::vector<LabelRow>& reference, int jobs = 1);

std::string agreement_csv(const AgreementReport& r);
std::string agreement_summary(const AgreementReport& r, bool color = false);

}  // namespace ffc::dataset
