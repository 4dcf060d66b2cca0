#include "ffc/classifier.hpp"

#include <algorithm>
#include <functional>

#include "json.hpp"

namespace ffc::classify {

using align::Alignment;
using align::PairStatus;
using flow::FlowGraph;
using flow::NodeKind;

namespace {

constexpr std::array<std::string_view, kClassCount> kNames = {"order", "jump",  "call", "pred",
                                                              "guard", "block", "def",  "use"};

std::string fref(int id) { return "F" + std::to_string(id); }
std::string rref(int id) { return "R" + std::to_string(id); }
std::string edge_ref(char side, const flow::CfgEdge& e) {
  return std::string(1, side) + std::to_string(e.src) + "->" + std::to_string(e.dst);
}

}  // namespace

std::string_view class_name(FaultClass c) { return kNames[static_cast<std::size_t>(c)]; }

std::optional<FaultClass> parse_class(std::string_view s) {
  for (std::size_t i = 0; i < kClassCount; ++i) {
    if (kNames[i] == s) return kAllClasses[i];
  }
  return std::nullopt;
}

bool is_control_flow(FaultClass c) { return c != FaultClass::Def && c != FaultClass::Use; }

FaultClassSet::FaultClassSet(std::initializer_list<FaultClass> cs) {
  for (FaultClass c : cs) add(c);
}

FaultClassSet FaultClassSet::from_bits(unsigned bits) {
  FaultClassSet s;
  s.bits_ = std::bitset<kClassCount>(bits);
  return s;
}

void FaultClassSet::add(FaultClass c, std::string evidence) {
  bits_.set(static_cast<std::size_t>(c));
  if (evidence.empty()) return;
  auto& ev = evidence_[c];
  if (std::find(ev.begin(), ev.end(), evidence) == ev.end()) ev.push_back(std::move(evidence));
}

std::vector<FaultClass> FaultClassSet::classes() const {
  std::vector<FaultClass> out;
  for (FaultClass c : kAllClasses) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

std::string FaultClassSet::to_string() const {
  std::string out = "{";
  for (FaultClass c : classes()) {
    if (out.size() > 1) out += ", ";
    out += class_name(c);
  }
  return out + "}";
}

std::string_view fault_type_name(FaultType t) {
  switch (t) {
    case FaultType::PureCF: return "pure-CF";
    case FaultType::PureDF: return "pure-DF";
    case FaultType::Mixed: return "mixed";
  }
  return "?";
}

FaultType fault_type(const FaultClassSet& s) {
  if (s.empty()) throw std::invalid_argument("fault_type of an empty class set");
  bool cf = false, df = false;
  for (FaultClass c : s.classes()) (is_control_flow(c) ? cf : df) = true;
  if (cf && df) return FaultType::Mixed;
  return cf ? FaultType::PureCF : FaultType::PureDF;
}

UnclassifiedDiff::UnclassifiedDiff(std::string detail)
    : std::runtime_error("graphs differ but no fault class applies: " + detail) {}

Context::Context(const FlowGraph& f_, const FlowGraph& r_, const Alignment& a_)
    : f(f_), r(r_), a(a_), diff(align::edge_diff(f_, r_, a_)) {}

// ---- block / guard ---------------------------------------------------------

namespace {

struct PredicateChange {
  bool in_fixed;  // inserted into R (missing in F) vs deleted from F
  int id;
  std::size_t pos;
};

std::vector<PredicateChange> changed_predicates(const Context& cx) {
  std::vector<PredicateChange> out;
  auto collect = [&](const FlowGraph& g, const std::set<int>& ids, bool in_fixed) {
    auto seq = align::sequence_order(g);
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (ids.count(seq[i]) && g.node(seq[i]).kind == NodeKind::Predicate) out.push_back({in_fixed, seq[i], i});
    }
  };
  collect(cx.r, cx.a.inserted, true);
  collect(cx.f, cx.a.deleted, false);
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.pos < y.pos; });
  return out;
}

}  // namespace

void detect_block(Context& cx, FaultClassSet& out) {
  for (const PredicateChange& p : changed_predicates(cx)) {
    const FlowGraph& g = p.in_fixed ? cx.r : cx.f;
    std::set<int>& mask = p.in_fixed ? cx.masks.fixed : cx.masks.faulty;
    const std::set<int>& unmatched = p.in_fixed ? cx.a.inserted : cx.a.deleted;
    if (mask.count(p.id)) continue;
    std::set<int> region = flow::guarded_region(g, p.id);
    bool any = false, all_unmatched = true;
    for (int id : region) {
      if (flow::is_jump_node(g, id)) continue;
      any = true;
      if (!unmatched.count(id)) all_unmatched = false;
    }
    if (!any || !all_unmatched) continue;
    out.add(FaultClass::Block, (p.in_fixed ? rref : fref)(p.id));
    mask.insert(p.id);
    for (int id : flow::condition_feeders(g, p.id)) mask.insert(id);
    mask.insert(region.begin(), region.end());
  }
}

void detect_guard(Context& cx, FaultClassSet& out) {
  for (const PredicateChange& p : changed_predicates(cx)) {
    const FlowGraph& g = p.in_fixed ? cx.r : cx.f;
    std::set<int>& mask = p.in_fixed ? cx.masks.fixed : cx.masks.faulty;
    if (mask.count(p.id)) continue;
    out.add(FaultClass::Guard, (p.in_fixed ? rref : fref)(p.id));
    mask.insert(p.id);
    for (int id : flow::condition_feeders(g, p.id)) mask.insert(id);
  }
}

// ---- pred ------------------------------------------------------------------

void detect_pred(Context& cx, FaultClassSet& out) {
  for (const align::NodePair& p : cx.a.pairs) {
    if (p.status != PairStatus::Modified || cx.f.node(p.faulty).kind != NodeKind::Predicate) continue;
    using Shape = std::tuple<flow::EdgeKind, std::string, flow::Jump, std::optional<int>>;
    std::set<Shape> fo, ro;
    for (const flow::CfgEdge* e : cx.f.out_edges(p.faulty)) fo.emplace(e->kind, e->label, e->jump, cx.a.to_fixed(e->dst));
    for (const flow::CfgEdge* e : cx.r.out_edges(p.fixed)) ro.emplace(e->kind, e->label, e->jump, e->dst);
    if (fo == ro) out.add(FaultClass::Pred, fref(p.faulty));
  }
}

// ---- order -----------------------------------------------------------------

namespace {

/// Maximal straight-line chain containing `id`, in execution order.
std::vector<int> basic_block(const FlowGraph& g, int id) {
  auto linear = [&](int from, int to) {
    return g.successors(from).size() == 1 && g.predecessors(to).size() == 1 &&
           g.node(from).kind != NodeKind::Predicate && from != g.entry && to != g.exit;
  };
  std::vector<int> block{id};
  std::set<int> seen{id};
  for (int cur = id;;) {
    auto preds = g.predecessors(cur);
    if (preds.size() != 1 || !linear(preds.front(), cur) || !seen.insert(preds.front()).second) break;
    cur = preds.front();
    block.insert(block.begin(), cur);
  }
  for (int cur = id;;) {
    auto succs = g.successors(cur);
    if (succs.size() != 1 || !linear(cur, succs.front()) || !seen.insert(succs.front()).second) break;
    cur = succs.front();
    block.push_back(cur);
  }
  return block;
}

}  // namespace

void detect_order(Context& cx, FaultClassSet& out) {
  // Pair deleted and inserted nodes with the same kind and label: the
  // candidates for a node that moved.
  std::map<int, int> moved;
  std::set<int> taken;
  auto fseq = align::sequence_order(cx.f), rseq = align::sequence_order(cx.r);
  for (int d : fseq) {
    if (!cx.a.deleted.count(d) || cx.masks.faulty.count(d)) continue;
    const flow::FlowNode& dn = cx.f.node(d);
    for (int i : rseq) {
      if (!cx.a.inserted.count(i) || cx.masks.fixed.count(i) || taken.count(i)) continue;
      const flow::FlowNode& in = cx.r.node(i);
      if (in.kind == dn.kind && flow::normalize_label(in.label) == flow::normalize_label(dn.label)) {
        moved[d] = i;
        taken.insert(i);
        break;
      }
    }
  }
  auto map_node = [&](int x) -> std::optional<int> {
    if (auto it = moved.find(x); it != moved.end()) return it->second;
    return cx.a.to_fixed(x);
  };
  for (const auto& [d, i] : moved) {
    std::vector<int> fb = basic_block(cx.f, d), rb = basic_block(cx.r, i);
    std::vector<int> mapped;
    for (int x : fb) {
      auto y = map_node(x);
      if (!y) break;
      mapped.push_back(*y);
    }
    if (mapped.size() != fb.size() || mapped == rb) continue;
    std::vector<int> s1 = mapped, s2 = rb;
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    if (s1 != s2) continue;
    out.add(FaultClass::Order, fref(d));
    out.add(FaultClass::Order, rref(i));
    cx.masks.faulty.insert(d);
    cx.masks.fixed.insert(i);
    cx.masks.faulty_edges.insert(fb.begin(), fb.end());
    cx.masks.fixed_edges.insert(rb.begin(), rb.end());
  }
}

// ---- jump ------------------------------------------------------------------

namespace {

/// The node itself when matched, otherwise the nearest matched predecessors.
std::set<int> source_anchors(const FlowGraph& g, int id, const std::function<bool(int)>& matched) {
  if (matched(id)) return {id};
  std::set<int> out, seen{id};
  std::vector<int> stack{id};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (int p : g.predecessors(cur)) {
      if (!seen.insert(p).second) continue;
      if (matched(p)) out.insert(p);
      else stack.push_back(p);
    }
  }
  return out;
}

using JumpKey = std::tuple<flow::Jump, std::optional<int>, std::set<int>>;

}  // namespace

void detect_jump(Context& cx, FaultClassSet& out) {
  auto f_matched = [&](int id) { return cx.a.to_fixed(id).has_value(); };
  auto r_matched = [&](int id) { return cx.a.to_faulty(id).has_value(); };

  // Rule 1: a jump edge whose (kind, target, source anchors) has no
  // counterpart on the other side. Keys are expressed in R ids.
  auto f_key = [&](const flow::CfgEdge& e) {
    std::set<int> anchors;
    for (int x : source_anchors(cx.f, e.src, f_matched)) anchors.insert(*cx.a.to_fixed(x));
    return JumpKey{e.jump_kind(), cx.a.to_fixed(e.dst), anchors};
  };
  auto r_key = [&](const flow::CfgEdge& e) {
    return JumpKey{e.jump_kind(), r_matched(e.dst) ? std::optional<int>(e.dst) : std::nullopt,
                   source_anchors(cx.r, e.src, r_matched)};
  };
  std::set<JumpKey> f_keys, r_keys;
  for (const flow::CfgEdge& e : cx.f.cfg) {
    if (e.is_jump()) f_keys.insert(f_key(e));
  }
  for (const flow::CfgEdge& e : cx.r.cfg) {
    if (e.is_jump()) r_keys.insert(r_key(e));
  }
  auto f_excluded = [&](int src) { return cx.masks.faulty.count(src) || cx.masks.faulty_edges.count(src); };
  auto r_excluded = [&](int src) { return cx.masks.fixed.count(src) || cx.masks.fixed_edges.count(src); };
  for (const flow::CfgEdge& e : cx.f.cfg) {
    if (e.is_jump() && !f_excluded(e.src) && !r_keys.count(f_key(e))) out.add(FaultClass::Jump, edge_ref('F', e));
  }
  for (const flow::CfgEdge& e : cx.r.cfg) {
    if (e.is_jump() && !r_excluded(e.src) && !f_keys.count(r_key(e))) out.add(FaultClass::Jump, edge_ref('R', e));
  }

  // Rule 2: an unconditional edge between existing nodes re-wired.
  for (const align::CfgChange& c : cx.diff.cfg_changed) {
    if (!c.faulty || !c.fixed) continue;
    const flow::CfgEdge& fe = *c.faulty;
    const flow::CfgEdge& re = *c.fixed;
    if (f_excluded(fe.src) || r_excluded(re.src)) continue;
    const flow::FlowNode& src = cx.f.node(fe.src);
    if (src.kind == NodeKind::Predicate || cx.f.out_edges(fe.src).size() != 1) continue;
    auto fdst = cx.a.to_fixed(fe.dst);
    if (!fdst || !r_matched(re.dst)) continue;
    if (*fdst != re.dst || fe.jump_kind() != re.jump_kind()) out.add(FaultClass::Jump, edge_ref('F', fe));
  }
}

// ---- call ------------------------------------------------------------------

void detect_call(Context& cx, FaultClassSet& out) {
  for (int id : cx.a.inserted) {
    const flow::FlowNode& n = cx.r.node(id);
    if (n.kind != NodeKind::CallParam || cx.masks.fixed.count(id)) continue;
    out.add(FaultClass::Call, rref(id));
    auto shape = flow::split_call_label(n.label);
    if (shape && !shape->args.empty()) cx.missing_call_args.push_back(rref(id));
  }
  for (int id : cx.a.deleted) {
    if (cx.f.node(id).kind == NodeKind::CallParam && !cx.masks.faulty.count(id)) out.add(FaultClass::Call, fref(id));
  }
  for (const align::NodePair& p : cx.a.pairs) {
    if (p.status != PairStatus::Modified || cx.f.node(p.faulty).kind != NodeKind::CallParam) continue;
    auto fs = flow::split_call_label(cx.f.node(p.faulty).label);
    auto rs = flow::split_call_label(cx.r.node(p.fixed).label);
    if (!fs || !rs || fs->callee != rs->callee || fs->receiver != rs->receiver) {
      out.add(FaultClass::Call, fref(p.faulty));
    }
  }
}

// ---- def -------------------------------------------------------------------

void detect_def(Context& cx, FaultClassSet& out) {
  for (const align::NodePair& p : cx.a.pairs) {
    if (p.status != PairStatus::Modified) continue;
    if (cx.masks.faulty.count(p.faulty) || cx.masks.fixed.count(p.fixed)) continue;
    const flow::FlowNode& fn = cx.f.node(p.faulty);
    const flow::FlowNode& rn = cx.r.node(p.fixed);
    if (fn.kind == NodeKind::Predicate) continue;
    if (fn.defs != rn.defs) {
      // Wrong location; a changed right-hand side on top still counts.
      out.add(FaultClass::Def, fref(p.faulty));
      continue;
    }
    if (!fn.defs.empty()) {
      out.add(FaultClass::Def, fref(p.faulty));
      continue;
    }
    if (fn.kind == NodeKind::CallParam) {
      auto fs = flow::split_call_label(fn.label);
      auto rs = flow::split_call_label(rn.label);
      if (fs && rs && fs->callee == rs->callee && fs->receiver == rs->receiver && fs->args != rs->args) {
        out.add(FaultClass::Def, fref(p.faulty));
      }
    }
  }
  for (int id : cx.a.inserted) {
    if (!cx.masks.fixed.count(id) && !cx.r.node(id).defs.empty()) out.add(FaultClass::Def, rref(id));
  }
  for (const std::string& ev : cx.missing_call_args) out.add(FaultClass::Def, ev);
  // Extraneous writes; a removed value return is a jump fault instead.
  for (int id : cx.a.deleted) {
    if (cx.masks.faulty.count(id) || cx.f.node(id).defs.empty() || flow::is_jump_node(cx.f, id)) continue;
    out.add(FaultClass::Def, fref(id));
  }
}

// ---- use -------------------------------------------------------------------

void detect_use(Context& cx, FaultClassSet& out) {
  for (const align::NodePair& p : cx.a.pairs) {
    const flow::FlowNode& fn = cx.f.node(p.faulty);
    const flow::FlowNode& rn = cx.r.node(p.fixed);
    for (const flow::Variable& v : rn.uses) {
      if (fn.uses.count(v)) continue;
      for (const flow::DfgEdge& d : cx.r.dfg) {
        if (d.use != p.fixed || d.var != v) continue;
        auto src = cx.a.to_faulty(d.def);
        if (src && cx.f.node(*src).defs.count(v)) {
          out.add(FaultClass::Use, rref(p.fixed));
          break;
        }
      }
    }
  }
}

// ---- driver ----------------------------------------------------------------

bool graphs_differ(const FlowGraph& f, const FlowGraph& r, const Alignment& a) {
  if (!a.deleted.empty() || !a.inserted.empty()) return true;
  for (const align::NodePair& p : a.pairs) {
    if (p.status == PairStatus::Modified) return true;
  }
  auto diff = align::edge_diff(f, r, a);
  return !diff.cfg_changed.empty() || !diff.dfg_changed.empty();
}

FaultClassSet classify(const FlowGraph& f, const FlowGraph& r) { return classify(f, r, align::align(f, r)); }

FaultClassSet classify(const FlowGraph& f, const FlowGraph& r, const Alignment& a) {
  Context cx(f, r, a);
  FaultClassSet out;
  detect_block(cx, out);
  detect_guard(cx, out);
  detect_pred(cx, out);
  detect_order(cx, out);
  detect_jump(cx, out);
  detect_call(cx, out);
  detect_def(cx, out);
  detect_use(cx, out);
  if (out.empty() && graphs_differ(f, r, a)) {
    std::string detail = std::to_string(a.deleted.size()) + " deleted, " + std::to_string(a.inserted.size()) +
                         " inserted, " + std::to_string(cx.diff.cfg_changed.size()) + " cfg and " +
                         std::to_string(cx.diff.dfg_changed.size()) + " dfg edge changes";
    throw UnclassifiedDiff(detail);
  }
  return out;
}

std::string classification_json(const std::string& entry, const FaultClassSet& s) {
  nlohmann::ordered_json j;
  j["entry"] = entry;
  j["classes"] = nlohmann::json::array();
  for (FaultClass c : s.classes()) j["classes"].push_back(class_name(c));
  j["fault_type"] = s.empty() ? "none" : fault_type_name(fault_type(s));
  nlohmann::ordered_json ev = nlohmann::ordered_json::object();
  for (FaultClass c : s.classes()) {
    auto it = s.evidence().find(c);
    ev[std::string(class_name(c))] = it == s.evidence().end() ? std::vector<std::string>{} : it->second;
  }
  j["evidence"] = ev;
  return j.dump();
}

}  // namespace ffc::classify
