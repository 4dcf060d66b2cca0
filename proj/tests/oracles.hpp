// Independent reference implementations used by the tests and the
// acceptance binary. None of these call into the code under test beyond
// reading graph structure.
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ffc/flowgraph.hpp"

namespace oracle {

using ffc::flow::DfgEdge;
using ffc::flow::FlowGraph;

inline bool weak(const std::string& v) {
  return v.find('.') != std::string::npos || (v.size() > 2 && v.compare(v.size() - 2, 2, "[]") == 0);
}

// ---- reaching definitions by path enumeration ------------------------------

/// Plain DAG view: successors per node, defs and uses per node.
struct Dag {
  std::map<int, std::vector<int>> succ;
  std::map<int, std::set<std::string>> defs, uses;
  int entry = 0;
};

/// Every def-use triple witnessed by some entry path in an acyclic graph:
/// walk each entry->u path backwards from u and collect the defs of v met
/// before (and including) the first strong def.
inline std::set<std::tuple<int, int, std::string>> dag_def_use(const Dag& g) {
  std::set<std::tuple<int, int, std::string>> out;
  std::vector<int> path;
  std::function<void(int)> walk = [&](int n) {
    path.push_back(n);
    auto uit = g.uses.find(n);
    if (uit != g.uses.end()) {
      for (const std::string& v : uit->second) {
        for (std::size_t k = path.size() - 1; k-- > 0;) {
          int d = path[k];
          auto dit = g.defs.find(d);
          if (dit == g.defs.end() || !dit->second.count(v)) continue;
          out.emplace(d, n, v);
          if (!weak(v)) break;
        }
      }
    }
    auto sit = g.succ.find(n);
    if (sit != g.succ.end()) {
      for (int s : sit->second) walk(s);
    }
    path.pop_back();
  };
  walk(g.entry);
  return out;
}

inline Dag dag_of(const FlowGraph& g) {
  Dag d;
  d.entry = g.entry;
  for (const auto& [id, n] : g.nodes) {
    d.defs[id] = n.defs;
    d.uses[id] = n.uses;
    d.succ[id];
  }
  for (const auto& e : g.cfg) {
    auto& s = d.succ[e.src];
    if (std::find(s.begin(), s.end(), e.dst) == s.end()) s.push_back(e.dst);
  }
  return d;
}

/// CFG edges closing a cycle in a DFS from entry.
inline std::set<std::pair<int, int>> back_edges(const FlowGraph& g) {
  std::set<std::pair<int, int>> back;
  std::map<int, int> state;  // 1 on stack, 2 done
  std::function<void(int)> dfs = [&](int n) {
    state[n] = 1;
    std::set<int> succ;
    for (const auto& e : g.cfg) {
      if (e.src == n) succ.insert(e.dst);
    }
    for (int s : succ) {
      if (state[s] == 1) back.emplace(n, s);
      else if (state[s] == 0) dfs(s);
    }
    state[n] = 2;
  };
  dfs(g.entry);
  return back;
}

inline bool acyclic(const FlowGraph& g) { return back_edges(g).empty(); }

/// Path enumeration over the loop-unrolled expansion: every entry path that
/// takes each back edge at most `unroll` times, walked as in dag_def_use.
/// With unroll = 2 this is exhaustive, since a witness path splits into a
/// simple entry->d prefix and a simple d->u suffix.
inline std::set<std::tuple<int, int, std::string>> unrolled_oracle(const FlowGraph& g, int unroll = 2) {
  const auto back = back_edges(g);
  const Dag d = dag_of(g);
  std::map<std::pair<int, int>, int> taken;
  std::set<std::tuple<int, int, std::string>> out;
  std::vector<int> path;
  std::function<void(int)> walk = [&](int n) {
    path.push_back(n);
    for (const std::string& v : d.uses.at(n)) {
      for (std::size_t k = path.size() - 1; k-- > 0;) {
        if (!d.defs.at(path[k]).count(v)) continue;
        out.emplace(path[k], n, v);
        if (!weak(v)) break;
      }
    }
    for (int s : d.succ.at(n)) {
      if (!back.count({n, s})) {
        walk(s);
      } else if (taken[{n, s}] < unroll) {
        ++taken[{n, s}];
        walk(s);
        --taken[{n, s}];
      }
    }
    path.pop_back();
  };
  walk(g.entry);
  return out;
}

/// Def-use triples straight from the definition: (d, u, v) holds when some
/// path of at least one edge leads from d to u and no node strictly between
/// them strongly defines v. Works on any graph.
inline std::set<std::tuple<int, int, std::string>> def_clear_oracle(const FlowGraph& g) {
  std::map<int, std::set<int>> succ;
  for (const auto& e : g.cfg) succ[e.src].insert(e.dst);
  std::set<std::tuple<int, int, std::string>> out;
  for (const auto& [d, dn] : g.nodes) {
    for (const std::string& v : dn.defs) {
      std::set<int> seen;
      std::vector<int> stack(succ[d].begin(), succ[d].end());
      while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        const auto& node = g.nodes.at(n);
        if (node.uses.count(v)) out.emplace(d, n, v);
        if (!weak(v) && node.defs.count(v)) continue;
        for (int s : succ[n]) stack.push_back(s);
      }
    }
  }
  return out;
}

inline std::set<std::tuple<int, int, std::string>> dfg_triples(const FlowGraph& g) {
  std::set<std::tuple<int, int, std::string>> out;
  for (const DfgEdge& e : g.dfg) out.emplace(e.def, e.use, e.var);
  return out;
}

// ---- label statistics by brute force ---------------------------------------

/// Recount straight from 0/1 flag vectors, without any shared counter logic.
struct Recount {
  std::array<long, 8> count{};
  std::array<std::array<long, 8>, 8> both{};
  long cf = 0, df = 0, mixed = 0, n = 0;
  std::vector<int> sizes;  // classes per row, sorted
};

inline Recount recount(const std::vector<std::array<int, 8>>& flags) {
  Recount r;
  for (const auto& f : flags) {
    int k = 0;
    bool has_cf = false, has_df = false;
    for (int i = 0; i < 8; ++i) {
      if (!f[i]) continue;
      ++k;
      ++r.count[i];
      (i >= 6 ? has_df : has_cf) = true;
      for (int j = 0; j < 8; ++j) {
        if (f[j]) ++r.both[i][j];
      }
    }
    if (has_cf && has_df) ++r.mixed;
    else if (has_cf) ++r.cf;
    else if (has_df) ++r.df;
    r.sizes.push_back(k);
    ++r.n;
  }
  std::sort(r.sizes.begin(), r.sizes.end());
  return r;
}

/// Quartiles by listing: lower half = first ceil(n/2) values, upper half =
/// last ceil(n/2) values.
inline double median_list(std::vector<int> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

inline std::array<double, 5> five_numbers(const std::vector<int>& sorted) {
  std::size_t n = sorted.size();
  const auto half = static_cast<long>((n + 1) / 2);
  std::vector<int> lo(sorted.begin(), sorted.begin() + half);
  std::vector<int> hi(sorted.end() - half, sorted.end());
  return {double(sorted.front()), median_list(lo), median_list(sorted), median_list(hi), double(sorted.back())};
}

/// Random 0/1 rows with at least one flag set.
inline std::vector<std::array<int, 8>> random_flags(std::mt19937& rng, std::size_t n) {
  std::vector<std::array<int, 8>> out;
  std::bernoulli_distribution bit(0.27);
  std::uniform_int_distribution<int> pick(0, 7);
  while (out.size() < n) {
    std::array<int, 8> f{};
    for (int& x : f) x = bit(rng) ? 1 : 0;
    if (std::all_of(f.begin(), f.end(), [](int x) { return x == 0; })) f[pick(rng)] = 1;
    out.push_back(f);
  }
  return out;
}

// ---- random MiniJ programs -------------------------------------------------

/// Hand-rolled generator of single-method MiniJ programs over parameters
/// a, b, c, a field this.f and an array arr. Loops and switches are optional
/// so acyclic programs can be requested.
class ProgramGen {
 public:
  struct Options {
    bool loops = true;
    bool switches = true;
    int max_depth = 2;
    int max_stmts = 4;
  };

  ProgramGen(std::uint32_t seed, Options opt) : rng_(seed), opt_(opt) {}
  ProgramGen(std::uint32_t seed) : ProgramGen(seed, Options{}) {}

  std::string program() {
    std::string body = block(0, false, false, 1);
    return "int m(int a, int b, int c) {\n" + body + "}\n";
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string var() {
    static const char* vs[] = {"a", "b", "c", "this.f"};
    return vs[pick(4)];
  }

  std::string expr(int depth = 0) {
    switch (depth > 1 ? pick(3) : pick(7)) {
      case 0: return var();
      case 1: return std::to_string(pick(10));
      case 2: return var();
      case 3: return expr(depth + 1) + " + " + expr(depth + 1);
      case 4: return "g(" + expr(depth + 1) + ")";
      case 5: return "arr[" + var() + "]";
      default: return "(" + expr(depth + 1) + " * " + var() + ")";
    }
  }

  std::string cond() {
    static const char* ops[] = {"<", ">", "==", "!="};
    if (pick(4) == 0) return "h(" + var() + ")";
    return var() + " " + ops[pick(4)] + " " + expr(1);
  }

  std::string indent(int d) { return std::string(4 * (d + 1), ' '); }

  std::string stmt(int depth, bool in_loop, bool in_switch) {
    std::string in = indent(depth);
    int choices = depth >= opt_.max_depth ? 4 : 8;
    int c = pick(choices + ((in_loop || in_switch) ? 1 : 0));
    if (c >= choices) {
      if (in_loop && pick(2) == 0) return in + "continue;\n";
      if (in_switch || in_loop) return in + "break;\n";
    }
    switch (c) {
      case 0: return in + var() + " = " + expr() + ";\n";
      case 1: return in + var() + " += " + expr() + ";\n";
      case 2: return in + (pick(2) ? "arr[" + var() + "] = " + expr() : "p(" + expr() + ", " + var() + ")") + ";\n";
      case 3: return pick(3) == 0 ? in + "return " + expr() + ";\n" : in + var() + "++;\n";
      case 4:
      case 5: {
        std::string s = in + "if (" + cond() + ") {\n" + block(depth + 1, in_loop, in_switch) + in + "}";
        if (pick(2)) s += " else {\n" + block(depth + 1, in_loop, in_switch) + in + "}";
        return s + "\n";
      }
      case 6:
        if (opt_.loops) {
          if (pick(2)) return in + "while (" + cond() + ") {\n" + block(depth + 1, true, false) + in + "}\n";
          std::string i = "i" + std::to_string(loop_id_++);
          std::string bound = var();
          std::string body = block(depth + 1, true, false);
          return in + "for (int " + i + " = 0; " + i + " < " + bound + "; " + i + "++) {\n" + body + in + "}\n";
        }
        return in + var() + " = " + expr() + ";\n";
      default:
        if (opt_.switches) {
          std::string s = in + "switch (" + var() + ") {\n";
          int cases = 1 + pick(2);
          for (int k = 0; k < cases; ++k) {
            s += in + "    case " + std::to_string(k) + ":\n" + block(depth + 2, in_loop, true);
          }
          if (pick(2)) s += in + "    default:\n" + block(depth + 2, in_loop, true);
          return s + in + "}\n";
        }
        return in + "if (" + cond() + ") {\n" + block(depth + 1, in_loop, in_switch) + in + "}\n";
    }
  }

  std::string block(int depth, bool in_loop, bool in_switch, int min = 0) {
    int n = std::max(min, 1 + pick(opt_.max_stmts));
    std::string out;
    for (int i = 0; i < n; ++i) out += stmt(depth, in_loop, in_switch);
    return out;
  }

  std::mt19937 rng_;
  Options opt_;
  int loop_id_ = 0;
};

// ---- golden corpus ---------------------------------------------------------

inline std::filesystem::path golden_dir() { return std::filesystem::path(FFC_DATA_DIR) / "golden"; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace oracle
