#include "doctest.h"
#include "ffc/dataset.hpp"
#include "oracles.hpp"

#include <unistd.h>

using namespace ffc;
using classify::FaultClass;
using classify::FaultClassSet;
using dataset::Relation;

namespace {

const std::string kHeader = "project,id,order,jump,call,pred,guard,block,def,use\n";

// Scratch directory, removed on scope exit.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("ffc-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::filesystem::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return path / name;
  }
};

std::string entry_json(const std::string& id, const std::string& faulty = "a.mj", const std::string& fixed = "b.mj") {
  return R"({"project":"P","id":")" + id + R"(","faulty":")" + faulty + R"(","fixed":")" + fixed +
         R"(","method":"m"})";
}

}  // namespace

TEST_CASE("golden manifest loads with resolved paths and expectations") {
  auto entries = dataset::load_manifest(oracle::golden_dir() / "manifest.json");
  REQUIRE(entries.size() == 14);
  for (const auto& e : entries) {
    CHECK(std::filesystem::exists(e.faulty));
    CHECK(std::filesystem::exists(e.fixed));
    CHECK(e.expected.has_value());
  }
  CHECK(entries[0].id == "Chart-1");
  CHECK(*entries[0].expected == FaultClassSet{FaultClass::Pred});
}

TEST_CASE("manifest errors name the entry and field") {
  TempDir dir;
  dir.write("a.mj", "void m() { }");
  dir.write("b.mj", "void m() { }");

  SUBCASE("missing file") {
    try {
      dataset::parse_manifest("[" + entry_json("P-1", "nope.mj") + "]", dir.path);
      FAIL("expected ManifestError");
    } catch (const dataset::ManifestError& e) {
      CHECK(e.entry == "P-1");
      CHECK(e.field == "faulty");
    }
  }
  SUBCASE("duplicate id") {
    try {
      dataset::parse_manifest("[" + entry_json("P-1") + "," + entry_json("P-1") + "]", dir.path);
      FAIL("expected ManifestError");
    } catch (const dataset::ManifestError& e) {
      CHECK(e.entry == "P-1");
      CHECK(e.field == "id");
    }
  }
  SUBCASE("missing key") {
    CHECK_THROWS_AS(dataset::parse_manifest(R"([{"project":"P","id":"P-1","faulty":"a.mj","fixed":"b.mj"}])", dir.path),
                    dataset::ManifestError);
  }
  SUBCASE("unknown expected class") {
    std::string e = entry_json("P-1");
    e.insert(e.size() - 1, R"(,"expected":["loop"])");
    CHECK_THROWS_AS(dataset::parse_manifest("[" + e + "]", dir.path), dataset::ManifestError);
  }
  SUBCASE("not a list") {
    CHECK_THROWS_AS(dataset::parse_manifest("{}", dir.path), dataset::ManifestError);
    CHECK_THROWS_AS(dataset::parse_manifest("[", dir.path), dataset::ManifestError);
  }
  SUBCASE("valid") {
    auto entries = dataset::parse_manifest("[" + entry_json("P-1") + "]", dir.path);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].faulty == dir.path / "a.mj");
    CHECK_FALSE(entries[0].expected);
  }
}

TEST_CASE("a quoted label row decodes to its class set") {
  auto rows = dataset::parse_labels(kHeader + "\"Lang\",\"62\",0,1,0,0,0,0,0,0\n");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].project == "Lang");
  CHECK(rows[0].id == "62");
  CHECK(rows[0].classes == FaultClassSet{FaultClass::Jump});
}

TEST_CASE("label errors carry the line number") {
  auto line_of = [](const std::string& text) {
    try {
      dataset::parse_labels(text);
    } catch (const dataset::LabelError& e) {
      return e.line;
    }
    return -1;
  };
  CHECK(line_of(kHeader + "A,A-1,0,1,0,0,0,0,0,0\nA,A-2,0,0,0,0,0,0,0,0\n") == 3);
  CHECK(line_of(kHeader + "A,A-1,0,2,0,0,0,0,0,0\n") == 2);
  CHECK(line_of(kHeader + "A,A-1,0,1,0\n") == 2);
  CHECK(line_of("project,id,order\nA,1,1\n") == 1);
  CHECK(line_of(kHeader + "\"A,A-1,0,1,0,0,0,0,0,0\n") == 2);
  CHECK(line_of("") == 0);
}

TEST_CASE("labels round trip") {
  std::vector<dataset::LabelRow> rows = {
      {"Lang", "Lang-62", {FaultClass::Jump}},
      {"Math", "Math, 46", {FaultClass::Def, FaultClass::Use}},
      {"Odd \"name\"", "X-1", FaultClassSet::from_bits(0xff)},
  };
  std::string text = dataset::format_labels(rows);
  CHECK(dataset::parse_labels(text) == rows);
  CHECK(dataset::format_labels(dataset::parse_labels(text)) == text);

  TempDir dir;
  dataset::write_labels(rows, dir.path / "labels.csv");
  CHECK(dataset::read_labels(dir.path / "labels.csv") == rows);
}

TEST_CASE("labels round trip on random rows") {
  std::mt19937 rng(7);
  auto flags = oracle::random_flags(rng, 300);
  std::vector<dataset::LabelRow> rows;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    unsigned bits = 0;
    for (int k = 0; k < 8; ++k) bits |= static_cast<unsigned>(flags[i][k]) << k;
    rows.push_back({"P" + std::to_string(i % 5), "id-" + std::to_string(i), FaultClassSet::from_bits(bits)});
  }
  std::string text = dataset::format_labels(rows);
  CHECK(dataset::parse_labels(text) == rows);
  CHECK(dataset::format_labels(dataset::parse_labels(text)) == text);
}

TEST_CASE("golden label file is normalized") {
  std::string text = oracle::slurp(oracle::golden_dir() / "labels.csv");
  CHECK(dataset::format_labels(dataset::parse_labels(text)) == text);
}

TEST_CASE("column map renames external headers") {
  dataset::ColumnMap m;
  m.names = {{"id", "bug"}, {"def", "definition"}};
  auto rows = dataset::parse_labels("project,bug,order,jump,call,pred,guard,block,definition,use\nA,7,0,0,0,0,0,0,1,0\n", m);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].id == "7");
  CHECK(rows[0].classes == FaultClassSet{FaultClass::Def});
  CHECK(m.column("use") == "use");

  TempDir dir;
  auto cfg = dir.write("cols.json", R"({"id":"bug"})");
  CHECK(dataset::ColumnMap::load(cfg).column("id") == "bug");
}

TEST_CASE("relations") {
  FaultClassSet jump{FaultClass::Jump}, jump_def{FaultClass::Jump, FaultClass::Def};
  FaultClassSet def{FaultClass::Def}, use{FaultClass::Use}, def_use{FaultClass::Def, FaultClass::Use};
  CHECK(dataset::relate(jump, jump) == Relation::Exact);
  CHECK(dataset::relate(jump, jump_def) == Relation::Superset);
  CHECK(dataset::relate(jump_def, jump) == Relation::Subset);
  CHECK(dataset::relate(jump_def, def_use) == Relation::Overlap);
  CHECK(dataset::relate(jump, use) == Relation::Disjoint);
  CHECK(dataset::relate(jump, FaultClassSet{}) == Relation::Unclassified);
}

TEST_CASE("agreement on the golden corpus") {
  auto entries = dataset::load_manifest(oracle::golden_dir() / "manifest.json");
  auto labels = dataset::read_labels(oracle::golden_dir() / "labels.csv");
  auto report = dataset::compare(entries, labels, 2);
  std::size_t sum = 0;
  for (const auto& [rel, n] : report.counts) sum += n;
  CHECK(sum == report.entries.size());
  CHECK(report.entries.size() == 14);
  CHECK(report.counts.at(Relation::Exact) == 12);
  CHECK(report.counts.at(Relation::Superset) == 2);
  CHECK(report.exact_or_superset() == 14);
  std::string csv = dataset::agreement_csv(report);
  CHECK(csv.rfind("project,id,expected,actual,relation\n", 0) == 0);
  CHECK(csv.find("Lang,Lang-7,jump,jump guard,superset\n") != std::string::npos);
  CHECK(dataset::agreement_summary(report).find("exact=12 superset=2") != std::string::npos);
}

TEST_CASE("agreement counts partition mixed outcomes") {
  std::vector<dataset::EntryResult> results(4);
  results[0] = {"P", "P-1", FaultClassSet{FaultClass::Def}, false, "", ""};
  results[1] = {"P", "P-2", std::nullopt, true, "graphs differ", ""};
  results[2] = {"P", "P-3", std::nullopt, false, "parse error", ""};
  results[3] = {"P", "P-4", FaultClassSet{FaultClass::Use}, false, "", ""};
  std::vector<dataset::LabelRow> ref = {
      {"P", "P-1", {FaultClass::Def}}, {"P", "P-2", {FaultClass::Def}}, {"P", "P-3", {FaultClass::Def}}};
  auto report = dataset::compare(results, ref);
  CHECK(report.counts.at(Relation::Exact) == 1);
  CHECK(report.counts.at(Relation::Unclassified) == 1);
  CHECK(report.counts.at(Relation::Error) == 2);
  std::size_t sum = 0;
  for (const auto& [rel, n] : report.counts) sum += n;
  CHECK(sum == 4);
}

TEST_CASE("every golden entry classifies without an unclassified diff") {
  auto entries = dataset::load_manifest(oracle::golden_dir() / "manifest.json");
  for (const auto& r : dataset::classify_corpus(entries, {4, false})) {
    CAPTURE(r.id);
    CHECK_FALSE(r.unclassified);
    CHECK(r.error.empty());
    REQUIRE(r.classes);
    CHECK_FALSE(r.classes->empty());
  }
}

TEST_CASE("parallel corpus classification matches the serial reference") {
  auto entries = dataset::load_manifest(oracle::golden_dir() / "manifest.json");
  std::reverse(entries.begin(), entries.end());
  auto serial = dataset::classify_corpus_serial(entries, {1, true});
  for (int jobs : {1, 2, 3, 8}) {
    auto par = dataset::classify_corpus(entries, {jobs, true});
    REQUIRE(par.size() == serial.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].id == serial[i].id);
      CHECK(par[i].classes == serial[i].classes);
      CHECK(par[i].alignment == serial[i].alignment);
    }
  }
  CHECK(serial.front().id == "Chart-1");
}

TEST_CASE("load failures become per-entry errors") {
  TempDir dir;
  dir.write("a.mj", "void m() { x = ; }");
  dir.write("b.mj", "void m() { }");
  auto entries = dataset::parse_manifest("[" + entry_json("P-1") + "]", dir.path);
  auto r = dataset::classify_entry(entries[0]);
  CHECK_FALSE(r.classes);
  CHECK_FALSE(r.unclassified);
  CHECK(r.error.find("a.mj") != std::string::npos);
}
