#include "doctest.h"
#include "ffc/align.hpp"
#include "ffc/parser.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace ffc;
using align::PairStatus;
using flow::EdgeKind;
using flow::FlowGraph;

namespace {

FlowGraph graph(const std::string& stem, const char* side) {
  auto ast = minij::parse_source(oracle::slurp(oracle::golden_dir() / (stem + "." + side + ".mj")));
  return flow::build_flow_graph(ast, ast.methods.at(0).name);
}

FlowGraph build(const std::string& src) { return flow::build_flow_graph(minij::parse_source(src), "m"); }

int node_labelled(const FlowGraph& g, const std::string& label) {
  for (const auto& [id, n] : g.nodes) {
    if (n.label == label) return id;
  }
  FAIL("no node labelled " << label);
  return -1;
}

std::vector<std::string> golden_stems() {
  std::set<std::string> stems;
  for (const auto& e : std::filesystem::directory_iterator(oracle::golden_dir())) {
    std::string name = e.path().filename().string();
    auto dot = name.find(".faulty.mj");
    if (dot != std::string::npos) stems.insert(name.substr(0, dot));
  }
  return {stems.begin(), stems.end()};
}

std::set<std::pair<int, int>> swapped(const std::vector<align::NodePair>& pairs) {
  std::set<std::pair<int, int>> out;
  for (const auto& p : pairs) out.emplace(p.fixed, p.faulty);
  return out;
}

std::set<std::pair<int, int>> plain(const std::vector<align::NodePair>& pairs) {
  std::set<std::pair<int, int>> out;
  for (const auto& p : pairs) out.emplace(p.faulty, p.fixed);
  return out;
}

void check_well_formed(const FlowGraph& f, const FlowGraph& r, const align::Alignment& a) {
  std::set<int> seen_f(a.deleted), seen_r(a.inserted);
  for (const auto& p : a.pairs) {
    CHECK(seen_f.insert(p.faulty).second);
    CHECK(seen_r.insert(p.fixed).second);
    if (p.status == PairStatus::Identical) {
      CHECK(flow::normalize_label(f.node(p.faulty).label) == flow::normalize_label(r.node(p.fixed).label));
    }
    CHECK(f.node(p.faulty).kind == r.node(p.fixed).kind);
  }
  CHECK(seen_f.size() == f.nodes.size());
  CHECK(seen_r.size() == r.nodes.size());
  auto entry = a.pair_of_faulty(f.entry);
  REQUIRE(entry);
  CHECK(entry->fixed == r.entry);
  CHECK(entry->status == PairStatus::Identical);
  CHECK(a.to_fixed(f.exit) == r.exit);
}

}  // namespace

TEST_CASE("identical graphs align identically with no residue") {
  for (const auto& stem : golden_stems()) {
    CAPTURE(stem);
    FlowGraph g = graph(stem, "faulty");
    auto a = align::align(g, g);
    CHECK(a.deleted.empty());
    CHECK(a.inserted.empty());
    CHECK(a.pairs.size() == g.nodes.size());
    for (const auto& p : a.pairs) {
      CHECK(p.faulty == p.fixed);
      CHECK(p.status == PairStatus::Identical);
    }
    auto d = align::edge_diff(g, g, a);
    CHECK(d.cfg_changed.empty());
    CHECK(d.dfg_changed.empty());
  }
}

TEST_CASE("Chart-1: the flipped predicate pairs as modified") {
  FlowGraph f = graph("Chart-1", "faulty"), r = graph("Chart-1", "fixed");
  auto a = align::align(f, r);
  check_well_formed(f, r, a);
  CHECK(a.deleted.empty());
  CHECK(a.inserted.empty());
  int pf = node_labelled(f, "if (dataset != null)"), pr = node_labelled(r, "if (dataset == null)");
  auto* p = a.pair_of_faulty(pf);
  REQUIRE(p);
  CHECK(p->fixed == pr);
  CHECK(p->status == PairStatus::Modified);
  int modified = 0;
  for (const auto& q : a.pairs) modified += q.status == PairStatus::Modified ? 1 : 0;
  CHECK(modified == 1);
}

TEST_CASE("Lang-55: the guard is inserted, the guarded statement stays identical") {
  FlowGraph f = graph("Lang-55", "faulty"), r = graph("Lang-55", "fixed");
  auto a = align::align(f, r);
  check_well_formed(f, r, a);
  int sf = node_labelled(f, "stopTime = System.currentTimeMillis()");
  int sr = node_labelled(r, "stopTime = System.currentTimeMillis()");
  auto* p = a.pair_of_faulty(sf);
  REQUIRE(p);
  CHECK(p->fixed == sr);
  CHECK(p->status == PairStatus::Identical);
  CHECK(a.inserted.count(node_labelled(r, "if (this.runningState == STATE_RUNNING)")));
  CHECK(a.deleted.empty());
}

TEST_CASE("Lang-62: the inserted break rewires a fallthrough edge") {
  FlowGraph f = graph("Lang-62", "faulty"), r = graph("Lang-62", "fixed");
  auto a = align::align(f, r);
  check_well_formed(f, r, a);
  CHECK(a.deleted.empty());
  CHECK(a.inserted.empty());
  auto d = align::edge_diff(f, r, a);
  REQUIRE(d.cfg_changed.size() == 1);
  const auto& c = d.cfg_changed[0];
  REQUIRE(c.faulty);
  REQUIRE(c.fixed);
  CHECK(c.faulty->kind == EdgeKind::Fallthrough);
  CHECK(c.fixed->kind == EdgeKind::JumpBreak);
  CHECK(a.to_fixed(c.faulty->src) == c.fixed->src);
  CHECK(r.node(c.fixed->dst).label == "return entityValue");
}

TEST_CASE("Jsoup-57: the wrong receiver shows up as a DFG change") {
  FlowGraph f = graph("Jsoup-57", "faulty"), r = graph("Jsoup-57", "fixed");
  auto a = align::align(f, r);
  check_well_formed(f, r, a);
  auto d = align::edge_diff(f, r, a);
  bool found = false;
  for (const auto& c : d.dfg_changed) {
    if (c.faulty && c.fixed && c.faulty->var == "attributes" && c.fixed->var == "it") found = true;
  }
  CHECK(found);
}

TEST_CASE("edge_diff is empty under an explicit identity alignment") {
  for (const auto& stem : golden_stems()) {
    FlowGraph g = graph(stem, "fixed");
    std::vector<align::NodePair> pairs;
    for (const auto& [id, n] : g.nodes) pairs.push_back({id, id, PairStatus::Identical});
    auto a = align::from_pairs(pairs, {}, {});
    auto d = align::edge_diff(g, g, a);
    CHECK(d.cfg_changed.empty());
    CHECK(d.dfg_changed.empty());
  }
}

TEST_CASE("symmetry on every golden pair") {
  for (const auto& stem : golden_stems()) {
    CAPTURE(stem);
    FlowGraph f = graph(stem, "faulty"), r = graph(stem, "fixed");
    auto fr = align::align(f, r);
    auto rf = align::align(r, f);
    check_well_formed(f, r, fr);
    CHECK(plain(rf.pairs) == swapped(fr.pairs));
    CHECK(rf.deleted == fr.inserted);
    CHECK(rf.inserted == fr.deleted);
    CHECK(rf == fr.inverted());
  }
}

TEST_CASE("symmetry on generated pairs") {
  for (std::uint32_t seed = 1; seed <= 150; ++seed) {
    std::string a_src = oracle::ProgramGen(seed).program();
    std::string b_src = oracle::ProgramGen(seed + 10000).program();
    CAPTURE(a_src);
    CAPTURE(b_src);
    FlowGraph f = build(a_src), r = build(b_src);
    auto fr = align::align(f, r);
    check_well_formed(f, r, fr);
    CHECK(align::align(r, f) == fr.inverted());
  }
}

TEST_CASE("monotonicity: an unmatched extra statement only grows the inserted set") {
  struct Case {
    const char* base;
    const char* extended;
  };
  const Case cases[] = {
      {"int m(int a) { int x = a; if (x > 0) { x = 1; } return x; }",
       "int m(int a) { int x = a; if (x > 0) { x = 1; } zz = 99; return x; }"},
      {"void m(int a) { while (a > 0) { a--; } p(a); }", "void m(int a) { zz = 99; while (a > 0) { a--; } p(a); }"},
      {"void m(int a) { a = 1; a = 2; }", "void m(int a) { a = 1; zz = 99; a = 2; }"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.extended);
    FlowGraph f = build(c.base), r0 = build(c.base), r1 = build(c.extended);
    auto a0 = align::align(f, r0);
    auto a1 = align::align(f, r1);
    int extra = node_labelled(r1, "zz = 99");
    // Map r0 nodes to r1 nodes by label (labels are unique in these programs).
    std::map<int, int> relabel;
    for (const auto& [id, n] : r0.nodes) relabel[id] = node_labelled(r1, n.label);
    std::set<std::tuple<int, int, PairStatus>> expect, got;
    for (const auto& p : a0.pairs) expect.emplace(p.faulty, relabel.at(p.fixed), p.status);
    for (const auto& p : a1.pairs) got.emplace(p.faulty, p.fixed, p.status);
    CHECK(got == expect);
    CHECK(a1.deleted == a0.deleted);
    std::set<int> ins;
    for (int i : a0.inserted) ins.insert(relabel.at(i));
    ins.insert(extra);
    CHECK(a1.inserted == ins);
  }
}

TEST_CASE("different kinds never pair as modified") {
  FlowGraph f = build("void m(int a) { a = 1; p(a); }");
  FlowGraph r = build("void m(int a) { if (a > 1) { p(a); } }");
  auto a = align::align(f, r);
  check_well_formed(f, r, a);
  CHECK(a.deleted.count(node_labelled(f, "a = 1")));
  CHECK(a.inserted.count(node_labelled(r, "if (a > 1)")));
}

TEST_CASE("alignment JSON lists pairs, deleted and inserted") {
  FlowGraph f = graph("Lang-55", "faulty"), r = graph("Lang-55", "fixed");
  auto j = nlohmann::json::parse(align::alignment_json(f, r, align::align(f, r)));
  CHECK(j.contains("pairs"));
  CHECK(j["deleted"].empty());
  CHECK(j["inserted"].size() >= 1);
  CHECK(j["pairs"][0].contains("status"));
}
