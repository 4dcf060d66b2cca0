// Node correspondence between a faulty graph F and a fixed graph R.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ffc/flowgraph.hpp"

namespace ffc::align {

enum class PairStatus { Identical, Modified };

struct NodePair {
  int faulty = 0;
  int fixed = 0;
  PairStatus status = PairStatus::Identical;

  auto operator<=>(const NodePair&) const = default;
};

struct Alignment {
  std::vector<NodePair> pairs;  // sorted by faulty id
  std::set<int> deleted;        // only in F
  std::set<int> inserted;       // only in R

  std::optional<int> to_fixed(int faulty) const;
  std::optional<int> to_faulty(int fixed) const;
  const NodePair* pair_of_faulty(int faulty) const;
  const NodePair* pair_of_fixed(int fixed) const;

  /// The same correspondence seen from R's side.
  Alignment inverted() const;

  bool operator==(const Alignment&) const = default;

 private:
  friend Alignment align(const flow::FlowGraph&, const flow::FlowGraph&);
  friend Alignment from_pairs(std::vector<NodePair>, std::set<int>, std::set<int>);
  void index();
  std::map<int, std::size_t> by_faulty_;
  std::map<int, std::size_t> by_fixed_;
};

Alignment from_pairs(std::vector<NodePair> pairs, std::set<int> deleted, std::set<int> inserted);

/// Anchor phase (LCS over (kind, normalized label) in line/preorder sequence),
/// then propagation over anchor neighbourhoods. Swapping the arguments yields
/// the inverted alignment.
Alignment align(const flow::FlowGraph& f, const flow::FlowGraph& r);

/// Sequence order used by the anchor phase: body nodes by (line, DFS preorder).
std::vector<int> sequence_order(const flow::FlowGraph& g);

struct CfgChange {
  std::optional<flow::CfgEdge> faulty;
  std::optional<flow::CfgEdge> fixed;
  auto operator<=>(const CfgChange&) const = default;
};

struct DfgChange {
  std::optional<flow::DfgEdge> faulty;
  std::optional<flow::DfgEdge> fixed;
  auto operator<=>(const DfgChange&) const = default;
};

struct EdgeDiff {
  std::vector<CfgChange> cfg_changed;
  std::vector<DfgChange> dfg_changed;
};

/// Edges whose image under the alignment is absent from the other graph,
/// paired by mapped source (CFG) or mapped use node (DFG).
EdgeDiff edge_diff(const flow::FlowGraph& f, const flow::FlowGraph& r, const Alignment& a);

/// JSON dump: {"pairs":[{"faulty","fixed","status"}],"deleted":[..],"inserted":[..]}.
std::string alignment_json(const flow::FlowGraph& f, const flow::FlowGraph& r, const Alignment& a);

}  // namespace ffc::align
