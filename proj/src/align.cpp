#include "ffc/align.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <tuple>

#include "json.hpp"

namespace ffc::align {

using flow::FlowGraph;
using flow::NodeKind;

// ---- Alignment -------------------------------------------------------------

void Alignment::index() {
  std::sort(pairs.begin(), pairs.end());
  by_faulty_.clear();
  by_fixed_.clear();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    by_faulty_[pairs[i].faulty] = i;
    by_fixed_[pairs[i].fixed] = i;
  }
}

const NodePair* Alignment::pair_of_faulty(int faulty) const {
  auto it = by_faulty_.find(faulty);
  return it == by_faulty_.end() ? nullptr : &pairs[it->second];
}

const NodePair* Alignment::pair_of_fixed(int fixed) const {
  auto it = by_fixed_.find(fixed);
  return it == by_fixed_.end() ? nullptr : &pairs[it->second];
}

std::optional<int> Alignment::to_fixed(int faulty) const {
  const NodePair* p = pair_of_faulty(faulty);
  if (!p) return std::nullopt;
  return p->fixed;
}

std::optional<int> Alignment::to_faulty(int fixed) const {
  const NodePair* p = pair_of_fixed(fixed);
  if (!p) return std::nullopt;
  return p->faulty;
}

Alignment Alignment::inverted() const {
  std::vector<NodePair> flipped;
  for (const NodePair& p : pairs) flipped.push_back({p.fixed, p.faulty, p.status});
  return from_pairs(std::move(flipped), inserted, deleted);
}

Alignment from_pairs(std::vector<NodePair> pairs, std::set<int> deleted, std::set<int> inserted) {
  Alignment a;
  a.pairs = std::move(pairs);
  a.deleted = std::move(deleted);
  a.inserted = std::move(inserted);
  a.index();
  return a;
}

// ---- anchor phase ----------------------------------------------------------

std::vector<int> sequence_order(const FlowGraph& g) {
  std::map<int, int> pre;
  std::vector<int> stack{g.entry};
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    if (pre.count(id)) continue;
    pre.emplace(id, static_cast<int>(pre.size()));
    auto succ = g.successors(id);
    for (auto it = succ.rbegin(); it != succ.rend(); ++it) {
      if (!pre.count(*it)) stack.push_back(*it);
    }
  }
  std::vector<int> seq;
  for (const auto& [id, n] : g.nodes) {
    if (id != g.entry && id != g.exit) seq.push_back(id);
  }
  auto rank = [&](int id) {
    auto it = pre.find(id);
    return std::pair{g.node(id).line, it == pre.end() ? std::numeric_limits<int>::max() : it->second};
  };
  std::sort(seq.begin(), seq.end(), [&](int a, int b) { return rank(a) < rank(b) || (rank(a) == rank(b) && a < b); });
  return seq;
}

namespace {

using Key = std::pair<NodeKind, std::string>;

std::vector<Key> keys_of(const FlowGraph& g, const std::vector<int>& seq) {
  std::vector<Key> keys;
  for (int id : seq) keys.emplace_back(g.node(id).kind, flow::normalize_label(g.node(id).label));
  return keys;
}

/// Among all longest common subsequences, repeatedly take the next pair
/// closest to the diagonal start; the choice key is symmetric in (i, j).
std::vector<std::pair<std::size_t, std::size_t>> symmetric_lcs(const std::vector<Key>& a,
                                                               const std::vector<Key>& b) {
  const std::size_t n = a.size(), m = b.size();
  // suffix[i][j] = LCS length of a[i..] and b[j..]
  std::vector<std::vector<int>> suffix(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      suffix[i][j] = a[i] == b[j] ? suffix[i + 1][j + 1] + 1 : std::max(suffix[i + 1][j], suffix[i][j + 1]);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> chain;
  std::size_t pi = 0, pj = 0;
  while (suffix[pi][pj] > 0) {
    int want = suffix[pi][pj];
    std::optional<std::pair<std::size_t, std::size_t>> best;
    auto choice = [&](std::size_t i, std::size_t j) {
      std::size_t d = i > j ? i - j : j - i;
      return std::make_tuple(i + j, d, std::string_view(a[i].second), i);
    };
    for (std::size_t i = pi; i < n; ++i) {
      for (std::size_t j = pj; j < m; ++j) {
        if (a[i] != b[j] || suffix[i + 1][j + 1] + 1 != want) continue;
        if (!best || choice(i, j) < choice(best->first, best->second)) best = {i, j};
      }
    }
    chain.push_back(*best);
    pi = best->first + 1;
    pj = best->second + 1;
  }
  return chain;
}

// ---- propagation phase -----------------------------------------------------

std::set<int> anchor_set(const FlowGraph& g, int id, const std::set<int>& matched, bool forward) {
  std::set<int> out, seen{id};
  std::vector<int> stack{id};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (int nb : forward ? g.successors(cur) : g.predecessors(cur)) {
      if (!seen.insert(nb).second) continue;
      if (matched.count(nb)) out.insert(nb);
      else stack.push_back(nb);
    }
  }
  return out;
}

std::vector<std::string> label_tokens(std::string_view s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size();) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (std::isalnum(c) || c == '_' || c == '$') {
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '$')) ++j;
    }
    out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double jaccard(const std::vector<std::string>& x, const std::vector<std::string>& y) {
  std::vector<std::string> common;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
  std::size_t uni = x.size() + y.size() - common.size();
  return uni == 0 ? 1.0 : static_cast<double>(common.size()) / static_cast<double>(uni);
}

std::string callee_of(const flow::FlowNode& n) {
  if (n.kind != NodeKind::CallParam) return {};
  auto shape = flow::split_call_label(n.label);
  return shape ? shape->callee : std::string();
}

}  // namespace

Alignment align(const FlowGraph& f, const FlowGraph& r) {
  const std::vector<int> fs = sequence_order(f), rs = sequence_order(r);
  const std::vector<Key> fk = keys_of(f, fs), rk = keys_of(r, rs);
  std::map<int, std::size_t> fpos, rpos;
  for (std::size_t i = 0; i < fs.size(); ++i) fpos[fs[i]] = i;
  for (std::size_t j = 0; j < rs.size(); ++j) rpos[rs[j]] = j;

  std::map<int, int> f2r, r2f;
  auto bind = [&](int x, int y) {
    f2r[x] = y;
    r2f[y] = x;
  };
  bind(f.entry, r.entry);
  bind(f.exit, r.exit);
  for (auto [i, j] : symmetric_lcs(fk, rk)) bind(fs[i], rs[j]);

  while (true) {
    std::set<int> fm, rm;
    for (const auto& [x, y] : f2r) {
      fm.insert(x);
      rm.insert(y);
    }
    auto mapped = [&](const std::set<int>& s) {
      std::set<int> out;
      for (int x : s) out.insert(f2r.at(x));
      return out;
    };
    struct Candidate {
      int x, y;
      std::tuple<int, int, double> score;
      std::size_t diag, skew;
    };
    std::vector<Candidate> cands;
    std::map<int, std::pair<std::set<int>, std::set<int>>> rctx;
    for (int y : rs) {
      if (!rm.count(y)) rctx[y] = {anchor_set(r, y, rm, false), anchor_set(r, y, rm, true)};
    }
    for (int x : fs) {
      if (fm.count(x)) continue;
      auto preds = mapped(anchor_set(f, x, fm, false));
      auto succs = mapped(anchor_set(f, x, fm, true));
      const flow::FlowNode& fx = f.node(x);
      auto ftok = label_tokens(fx.label);
      for (const auto& [y, ctx] : rctx) {
        const flow::FlowNode& ry = r.node(y);
        if (ry.kind != fx.kind || ctx.first != preds || ctx.second != succs) continue;
        std::string callee = callee_of(fx);
        Candidate c{x, y,
                    {fx.defs == ry.defs ? 1 : 0, !callee.empty() && callee == callee_of(ry) ? 1 : 0,
                     jaccard(ftok, label_tokens(ry.label))},
                    fpos[x] + rpos[y], fpos[x] > rpos[y] ? fpos[x] - rpos[y] : rpos[y] - fpos[x]};
        cands.push_back(c);
      }
    }
    if (cands.empty()) break;
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      if (a.score != b.score) return a.score > b.score;
      return std::tie(a.diag, a.skew) < std::tie(b.diag, b.skew);
    });
    for (const Candidate& c : cands) {
      if (f2r.count(c.x) || r2f.count(c.y)) continue;
      bind(c.x, c.y);
    }
  }

  std::vector<NodePair> pairs;
  for (const auto& [x, y] : f2r) {
    bool same = flow::normalize_label(f.node(x).label) == flow::normalize_label(r.node(y).label);
    pairs.push_back({x, y, same ? PairStatus::Identical : PairStatus::Modified});
  }
  std::set<int> deleted, inserted;
  for (const auto& [id, n] : f.nodes) {
    if (!f2r.count(id)) deleted.insert(id);
  }
  for (const auto& [id, n] : r.nodes) {
    if (!r2f.count(id)) inserted.insert(id);
  }
  return from_pairs(std::move(pairs), std::move(deleted), std::move(inserted));
}

// ---- edge diff -------------------------------------------------------------

namespace {

std::size_t first_occurrence(const std::string& label, const std::string& var) {
  std::string base = var;
  if (base.size() > 2 && base.substr(base.size() - 2) == "[]") base.resize(base.size() - 2);
  std::size_t pos = label.find(base);
  return pos == std::string::npos ? label.size() : pos;
}

}  // namespace

EdgeDiff edge_diff(const FlowGraph& f, const FlowGraph& r, const Alignment& a) {
  EdgeDiff diff;

  std::vector<flow::CfgEdge> f_only, r_only;
  for (const flow::CfgEdge& e : f.cfg) {
    auto s = a.to_fixed(e.src), d = a.to_fixed(e.dst);
    if (s && d && r.cfg.count({*s, *d, e.kind, e.label, e.jump})) continue;
    f_only.push_back(e);
  }
  for (const flow::CfgEdge& e : r.cfg) {
    auto s = a.to_faulty(e.src), d = a.to_faulty(e.dst);
    if (s && d && f.cfg.count({*s, *d, e.kind, e.label, e.jump})) continue;
    r_only.push_back(e);
  }
  std::vector<bool> r_used(r_only.size(), false);
  for (const flow::CfgEdge& fe : f_only) {
    auto s = a.to_fixed(fe.src);
    std::optional<std::size_t> pick;
    if (s) {
      bool branching = f.node(fe.src).kind == NodeKind::Predicate;
      for (std::size_t k = 0; k < r_only.size(); ++k) {
        if (r_used[k] || r_only[k].src != *s) continue;
        if (branching && (r_only[k].kind != fe.kind || r_only[k].label != fe.label)) continue;
        pick = k;
        break;
      }
    }
    if (pick) {
      r_used[*pick] = true;
      diff.cfg_changed.push_back({fe, r_only[*pick]});
    } else {
      diff.cfg_changed.push_back({fe, std::nullopt});
    }
  }
  for (std::size_t k = 0; k < r_only.size(); ++k) {
    if (!r_used[k]) diff.cfg_changed.push_back({std::nullopt, r_only[k]});
  }

  std::map<int, std::vector<flow::DfgEdge>> f_by_use, r_by_use;  // keyed by R use id, or -1-faulty
  std::vector<flow::DfgEdge> f_lone;
  for (const flow::DfgEdge& e : f.dfg) {
    auto d = a.to_fixed(e.def), u = a.to_fixed(e.use);
    if (d && u && r.dfg.count({*d, *u, e.var})) continue;
    if (u) f_by_use[*u].push_back(e);
    else f_lone.push_back(e);
  }
  std::vector<flow::DfgEdge> r_lone;
  for (const flow::DfgEdge& e : r.dfg) {
    auto d = a.to_faulty(e.def), u = a.to_faulty(e.use);
    if (d && u && f.dfg.count({*d, *u, e.var})) continue;
    if (u) r_by_use[e.use].push_back(e);
    else r_lone.push_back(e);
  }
  std::set<int> uses;
  for (const auto& [u, es] : f_by_use) uses.insert(u);
  for (const auto& [u, es] : r_by_use) uses.insert(u);
  for (int u : uses) {
    auto fe = f_by_use[u];
    auto re = r_by_use[u];
    const std::string& flabel = f.node(*a.to_faulty(u)).label;
    const std::string& rlabel = r.node(u).label;
    std::stable_sort(fe.begin(), fe.end(), [&](const auto& x, const auto& y) {
      return first_occurrence(flabel, x.var) < first_occurrence(flabel, y.var);
    });
    std::stable_sort(re.begin(), re.end(), [&](const auto& x, const auto& y) {
      return first_occurrence(rlabel, x.var) < first_occurrence(rlabel, y.var);
    });
    for (std::size_t k = 0; k < std::max(fe.size(), re.size()); ++k) {
      DfgChange c;
      if (k < fe.size()) c.faulty = fe[k];
      if (k < re.size()) c.fixed = re[k];
      diff.dfg_changed.push_back(std::move(c));
    }
  }
  for (const auto& e : f_lone) diff.dfg_changed.push_back({e, std::nullopt});
  for (const auto& e : r_lone) diff.dfg_changed.push_back({std::nullopt, e});
  return diff;
}

std::string alignment_json(const FlowGraph& f, const FlowGraph& r, const Alignment& a) {
  using nlohmann::json;
  json pairs = json::array();
  for (const NodePair& p : a.pairs) {
    pairs.push_back({{"faulty", p.faulty},
                     {"fixed", p.fixed},
                     {"status", p.status == PairStatus::Identical ? "identical" : "modified"},
                     {"faulty_label", f.node(p.faulty).label},
                     {"fixed_label", r.node(p.fixed).label}});
  }
  json deleted = json::array(), inserted = json::array();
  for (int id : a.deleted) deleted.push_back({{"id", id}, {"label", f.node(id).label}});
  for (int id : a.inserted) inserted.push_back({{"id", id}, {"label", r.node(id).label}});
  return json{{"pairs", pairs}, {"deleted", deleted}, {"inserted", inserted}}.dump(2);
}

}  // namespace ffc::align
