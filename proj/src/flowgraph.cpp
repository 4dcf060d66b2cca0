#include "ffc/flowgraph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <limits>

namespace ffc::flow {

namespace {

constexpr std::array<std::pair<NodeKind, std::string_view>, 5> kNodeKinds = {{
    {NodeKind::Entry, "entry"},
    {NodeKind::Exit, "exit"},
    {NodeKind::Statement, "statement"},
    {NodeKind::Predicate, "predicate"},
    {NodeKind::CallParam, "call-param"},
}};

constexpr std::array<std::pair<EdgeKind, std::string_view>, 10> kEdgeKinds = {{
    {EdgeKind::Seq, "seq"},
    {EdgeKind::True, "true"},
    {EdgeKind::False, "false"},
    {EdgeKind::Case, "case"},
    {EdgeKind::JumpBreak, "jump-break"},
    {EdgeKind::JumpContinue, "jump-continue"},
    {EdgeKind::JumpReturn, "jump-return"},
    {EdgeKind::JumpThrow, "jump-throw"},
    {EdgeKind::Call, "call"},
    {EdgeKind::Fallthrough, "fallthrough"},
}};

constexpr std::array<std::pair<Jump, std::string_view>, 5> kJumps = {{
    {Jump::None, ""},
    {Jump::Break, "break"},
    {Jump::Continue, "continue"},
    {Jump::Return, "return"},
    {Jump::Throw, "throw"},
}};

template <typename Table, typename Key>
std::string_view name_of(const Table& table, Key k) {
  for (const auto& [key, name] : table) {
    if (key == k) return name;
  }
  return "?";
}

template <typename Key, typename Table>
std::optional<Key> key_of(const Table& table, std::string_view s) {
  for (const auto& [key, name] : table) {
    if (name == s) return key;
  }
  return std::nullopt;
}

}  // namespace

// ---- FlowGraph -------------------------------------------------------------

Jump CfgEdge::jump_kind() const {
  switch (kind) {
    case EdgeKind::JumpBreak: return Jump::Break;
    case EdgeKind::JumpContinue: return Jump::Continue;
    case EdgeKind::JumpReturn: return Jump::Return;
    case EdgeKind::JumpThrow: return Jump::Throw;
    default: return jump;
  }
}

const FlowNode& FlowGraph::node(int id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) throw std::out_of_range("no flow node " + std::to_string(id));
  return it->second;
}

std::vector<const CfgEdge*> FlowGraph::out_edges(int id) const {
  std::vector<const CfgEdge*> out;
  for (auto it = cfg.lower_bound(CfgEdge{id, std::numeric_limits<int>::min(), EdgeKind::Seq, {}, Jump::None});
       it != cfg.end() && it->src == id; ++it) {
    out.push_back(&*it);
  }
  return out;
}

std::vector<const CfgEdge*> FlowGraph::in_edges(int id) const {
  std::vector<const CfgEdge*> out;
  for (const CfgEdge& e : cfg) {
    if (e.dst == id) out.push_back(&e);
  }
  return out;
}

std::vector<int> FlowGraph::successors(int id) const {
  std::vector<int> out;
  for (const CfgEdge* e : out_edges(id)) out.push_back(e->dst);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> FlowGraph::predecessors(int id) const {
  std::vector<int> out;
  for (const CfgEdge* e : in_edges(id)) out.push_back(e->src);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view node_kind_name(NodeKind k) { return name_of(kNodeKinds, k); }
std::string_view edge_kind_name(EdgeKind k) { return name_of(kEdgeKinds, k); }
std::string_view jump_name(Jump j) { return name_of(kJumps, j); }
std::optional<NodeKind> parse_node_kind(std::string_view s) { return key_of<NodeKind>(kNodeKinds, s); }
std::optional<EdgeKind> parse_edge_kind(std::string_view s) { return key_of<EdgeKind>(kEdgeKinds, s); }
std::optional<Jump> parse_jump(std::string_view s) { return key_of<Jump>(kJumps, s); }

bool is_weak_variable(std::string_view v) {
  return v.find('.') != std::string_view::npos ||
         (v.size() > 2 && v.substr(v.size() - 2) == "[]");
}

// ---- data flow -------------------------------------------------------------

ReachingDefs reaching_definitions(const FlowGraph& g) {
  ReachingDefs in, out;
  for (const auto& [id, n] : g.nodes) {
    in[id];
    out[id];
  }
  std::deque<int> work;
  std::set<int> queued;
  for (const auto& [id, n] : g.nodes) {
    work.push_back(id);
    queued.insert(id);
  }
  while (!work.empty()) {
    int id = work.front();
    work.pop_front();
    queued.erase(id);
    const FlowNode& n = g.node(id);

    DefSet merged;
    for (int p : g.predecessors(id)) merged.insert(out[p].begin(), out[p].end());
    DefSet next;
    for (const auto& d : merged) {
      if (n.defs.count(d.first) && !is_weak_variable(d.first)) continue;
      next.insert(d);
    }
    for (const Variable& v : n.defs) next.emplace(v, id);
    in[id] = std::move(merged);
    if (next != out[id]) {
      out[id] = std::move(next);
      for (int s : g.successors(id)) {
        if (queued.insert(s).second) work.push_back(s);
      }
    }
  }
  return in;
}

FlowGraph build_dfg(FlowGraph g, DfgReport* report) {
  ReachingDefs in = reaching_definitions(g);
  g.dfg.clear();
  for (const auto& [id, n] : g.nodes) {
    const DefSet& reach = in.at(id);
    for (const Variable& v : n.uses) {
      bool found = false;
      for (auto it = reach.lower_bound({v, std::numeric_limits<int>::min()});
           it != reach.end() && it->first == v; ++it) {
        g.dfg.insert(DfgEdge{it->second, id, v});
        found = true;
      }
      if (!found && report) report->undefined_uses.emplace_back(id, v);
    }
  }
  return g;
}

// ---- validation ------------------------------------------------------------

FormatError::FormatError(std::string w, std::string what)
    : std::runtime_error(w + ": " + what), where(std::move(w)), what_failed(std::move(what)) {}

namespace {

std::set<int> reachable(const FlowGraph& g, int from, bool forward) {
  std::set<int> seen{from};
  std::vector<int> stack{from};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    for (int nb : forward ? g.successors(id) : g.predecessors(id)) {
      if (seen.insert(nb).second) stack.push_back(nb);
    }
  }
  return seen;
}

std::string node_ref(int id) { return "node " + std::to_string(id); }

std::string edge_ref(const CfgEdge& e) {
  return "cfg edge " + std::to_string(e.src) + "->" + std::to_string(e.dst);
}

}  // namespace

void validate(const FlowGraph& g) {
  if (!g.has_node(g.entry) || g.node(g.entry).kind != NodeKind::Entry) {
    throw FormatError(node_ref(g.entry), "entry must name a node of kind entry");
  }
  if (!g.has_node(g.exit) || g.node(g.exit).kind != NodeKind::Exit) {
    throw FormatError(node_ref(g.exit), "exit must name a node of kind exit");
  }
  for (const auto& [id, n] : g.nodes) {
    if (id != n.id) throw FormatError(node_ref(id), "id mismatch");
    if ((n.kind == NodeKind::Entry && id != g.entry) || (n.kind == NodeKind::Exit && id != g.exit)) {
      throw FormatError(node_ref(id), "more than one entry/exit node");
    }
    if (n.kind == NodeKind::Entry && !n.uses.empty()) throw FormatError(node_ref(id), "entry has uses");
    if (n.kind == NodeKind::Predicate && !n.defs.empty()) {
      throw FormatError(node_ref(id), "predicate node has defs");
    }
    for (const Variable& v : n.defs) {
      if (v.empty()) throw FormatError(node_ref(id), "empty variable name");
    }
    for (const Variable& v : n.uses) {
      if (v.empty()) throw FormatError(node_ref(id), "empty variable name");
    }
  }
  for (const CfgEdge& e : g.cfg) {
    if (!g.has_node(e.src) || !g.has_node(e.dst)) throw FormatError(edge_ref(e), "dangling endpoint");
    if (e.dst == g.entry) throw FormatError(edge_ref(e), "edge into entry");
  }
  for (const auto& [id, n] : g.nodes) {
    auto out = g.out_edges(id);
    if (n.kind == NodeKind::Exit) {
      if (!out.empty()) throw FormatError(node_ref(id), "exit has outgoing edges");
      continue;
    }
    if (n.kind != NodeKind::Predicate) {
      if (out.size() != 1) throw FormatError(node_ref(id), "non-predicate node needs exactly one outgoing edge");
      continue;
    }
    int t = 0, f = 0, c = 0;
    std::set<std::pair<EdgeKind, std::string>> seen;
    for (const CfgEdge* e : out) {
      if (!seen.emplace(e->kind, e->label).second) {
        throw FormatError(node_ref(id), "predicate has two out-edges of the same kind");
      }
      t += e->kind == EdgeKind::True;
      f += e->kind == EdgeKind::False;
      c += e->kind == EdgeKind::Case;
      if (e->kind != EdgeKind::True && e->kind != EdgeKind::False && e->kind != EdgeKind::Case) {
        throw FormatError(node_ref(id), "predicate out-edge must be true/false/case");
      }
    }
    bool ok = c > 0 ? (t == 0 && f == 1) : (t == 1 && f == 1);
    if (!ok) throw FormatError(node_ref(id), "predicate needs one true and one false edge (or cases plus false)");
  }
  auto from_entry = reachable(g, g.entry, true);
  auto to_exit = reachable(g, g.exit, false);
  for (const auto& [id, n] : g.nodes) {
    if (!from_entry.count(id)) throw FormatError(node_ref(id), "unreachable from entry");
    if (!to_exit.count(id)) throw FormatError(node_ref(id), "cannot reach exit");
  }
  ReachingDefs in;
  if (!g.dfg.empty()) in = reaching_definitions(g);
  for (const DfgEdge& d : g.dfg) {
    std::string where = "dfg edge " + std::to_string(d.def) + "->" + std::to_string(d.use) + " (" + d.var + ")";
    if (!g.has_node(d.def) || !g.has_node(d.use)) throw FormatError(where, "dangling endpoint");
    if (!g.node(d.def).defs.count(d.var)) throw FormatError(where, "var not in defs of source");
    if (!g.node(d.use).uses.count(d.var)) throw FormatError(where, "var not in uses of target");
    if (!in.at(d.use).count({d.var, d.def})) throw FormatError(where, "no definition-clear path");
  }
}

// ---- labels ----------------------------------------------------------------

std::string normalize_label(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  for (std::size_t i = 0; i < label.size();) {
    char c = label[i];
    if (c == '"' || c == '\'') {
      std::size_t j = i + 1;
      while (j < label.size() && label[j] != c) j += label[j] == '\\' ? 2 : 1;
      j = std::min(j + 1, label.size());
      out.append(label.substr(i, j - i));
      i = j;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    bool boundary = out.empty() || !(std::isalnum(static_cast<unsigned char>(out.back())) ||
                                     out.back() == '_' || out.back() == '$');
    if (boundary && std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::string num;
      while (j < label.size() &&
             (std::isalnum(static_cast<unsigned char>(label[j])) || label[j] == '.' || label[j] == '_')) {
        if (label[j] != '_') num += static_cast<char>(std::tolower(static_cast<unsigned char>(label[j])));
        ++j;
      }
      if (!num.empty() && num.back() == 'l') num.back() = 'L';
      out += num;
      i = j;
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

std::optional<CallShape> split_call_label(std::string_view label) {
  std::string_view s = label;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty() || s.back() != ')') return std::nullopt;
  // Find the '(' matching the final ')'.
  int depth = 0;
  std::size_t open = std::string_view::npos;
  char quote = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (quote) {
      if (c == '\\') ++i;
      else if (c == quote) quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') quote = c;
    else if (c == '(' || c == '[') {
      if (depth == 0 && c == '(') open = i;
      ++depth;
    } else if (c == ')' || c == ']') {
      --depth;
    }
  }
  if (open == std::string_view::npos || depth != 0) return std::nullopt;
  std::size_t end = open;
  while (end > 0 && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  std::size_t begin = end;
  while (begin > 0 && (std::isalnum(static_cast<unsigned char>(s[begin - 1])) || s[begin - 1] == '_' ||
                       s[begin - 1] == '$')) {
    --begin;
  }
  if (begin == end) return std::nullopt;
  CallShape shape;
  shape.callee = std::string(s.substr(begin, end - begin));
  std::string_view recv = s.substr(0, begin);
  while (!recv.empty() && (std::isspace(static_cast<unsigned char>(recv.back())) || recv.back() == '.')) {
    recv.remove_suffix(1);
  }
  shape.receiver = normalize_label(recv);
  std::string_view inner = s.substr(open + 1, s.size() - open - 2);
  std::string cur;
  depth = 0;
  quote = 0;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    char c = inner[i];
    if (quote) {
      cur += c;
      if (c == '\\' && i + 1 < inner.size()) cur += inner[++i];
      else if (c == quote) quote = 0;
      continue;
    }
    if (c == '"' || c == '\'') quote = c;
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      shape.args.push_back(normalize_label(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (!normalize_label(cur).empty() || !shape.args.empty()) shape.args.push_back(normalize_label(cur));
  return shape;
}

// ---- structural queries ----------------------------------------------------

std::vector<int> condition_feeders(const FlowGraph& g, int pred) {
  std::vector<int> feeders;
  std::set<int> group{pred};
  int cur = pred;
  while (true) {
    auto preds = g.predecessors(cur);
    if (preds.size() != 1) break;
    int q = preds.front();
    const FlowNode& n = g.node(q);
    if (n.kind != NodeKind::CallParam || g.successors(q).size() != 1) break;
    if (n.defs != std::set<Variable>{std::string(kRetVar)}) break;
    if (!g.node(cur).uses.count(std::string(kRetVar)) && cur == pred) break;
    bool private_result = true;
    for (const DfgEdge& d : g.dfg) {
      if (d.def == q && !group.count(d.use)) private_result = false;
    }
    if (!private_result) break;
    feeders.push_back(q);
    group.insert(q);
    cur = q;
  }
  std::reverse(feeders.begin(), feeders.end());
  return feeders;
}

std::set<int> guarded_region(const FlowGraph& g, int pred) {
  std::set<int> stop{pred};
  for (int f : condition_feeders(g, pred)) stop.insert(f);

  std::vector<std::set<int>> branches;
  for (const CfgEdge* e : g.out_edges(pred)) {
    std::set<int> seen;
    if (!e->is_jump() && !stop.count(e->dst)) {
      std::vector<int> stack{e->dst};
      seen.insert(e->dst);
      while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        for (const CfgEdge* o : g.out_edges(id)) {
          if (o->is_jump() || stop.count(o->dst)) continue;
          if (seen.insert(o->dst).second) stack.push_back(o->dst);
        }
      }
    }
    branches.push_back(std::move(seen));
  }
  if (branches.empty()) return {};

  std::set<int> join = branches.front();
  for (std::size_t i = 1; i < branches.size(); ++i) {
    std::set<int> keep;
    for (int id : join) {
      if (branches[i].count(id)) keep.insert(id);
    }
    join = std::move(keep);
  }
  if (join.empty()) {
    // No common continuation: the branches that complete normally are the
    // continuation, the terminating ones are guarded.
    for (const auto& b : branches) {
      if (b.count(g.exit)) join.insert(b.begin(), b.end());
    }
  }
  if (join.empty()) {
    // Every branch ends in a jump: the false edge leads on.
    auto out = g.out_edges(pred);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i]->kind == EdgeKind::False) join.insert(branches[i].begin(), branches[i].end());
    }
  }
  std::set<int> region;
  for (const auto& b : branches) {
    for (int id : b) {
      if (!join.count(id) && id != g.exit) region.insert(id);
    }
  }
  return region;
}

bool is_jump_node(const FlowGraph& g, int id) {
  const FlowNode& n = g.node(id);
  if (n.kind != NodeKind::Statement) return false;
  if (!n.defs.count(std::string(kRetVar)) && !n.defs.count(std::string(kExcVar))) return false;
  auto out = g.out_edges(id);
  return out.size() == 1 &&
         (out.front()->kind == EdgeKind::JumpReturn || out.front()->kind == EdgeKind::JumpThrow);
}

}  // namespace ffc::flow
