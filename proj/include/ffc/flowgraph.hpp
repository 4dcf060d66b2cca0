// Combined control-/data-flow graph of a single method.
//
// Statements become nodes; break/continue/return/throw contribute CFG edges
// only. A value-carrying `return e` / `throw e` is a node defining the special
// variable <ret> / <exc> followed by the jump edge. Method calls are hoisted
// into call-param nodes that model parameter passing; their outgoing CFG edge
// has kind `call`.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ffc/ast.hpp"

namespace ffc::flow {

using Variable = std::string;

inline constexpr std::string_view kRetVar = "<ret>";
inline constexpr std::string_view kExcVar = "<exc>";

enum class NodeKind { Entry, Exit, Statement, Predicate, CallParam };

enum class EdgeKind {
  Seq,
  True,
  False,
  Case,
  JumpBreak,
  JumpContinue,
  JumpReturn,
  JumpThrow,
  Call,
  Fallthrough,
};

/// Jump statement riding on an edge whose kind must stay structural
/// (a predicate's branch edge or a call edge), e.g. `if (c) return;`.
enum class Jump { None, Break, Continue, Return, Throw };

struct FlowNode {
  int id = 0;
  NodeKind kind = NodeKind::Statement;
  std::string label;
  int line = 0;
  std::set<Variable> defs;
  std::set<Variable> uses;

  bool operator==(const FlowNode&) const = default;
};

struct CfgEdge {
  int src = 0;
  int dst = 0;
  EdgeKind kind = EdgeKind::Seq;
  /// Case label for `case` edges, empty otherwise.
  std::string label;
  Jump jump = Jump::None;

  auto operator<=>(const CfgEdge&) const = default;

  /// The jump statement this edge lowers, if any.
  Jump jump_kind() const;
  bool is_jump() const { return jump_kind() != Jump::None; }
};

struct DfgEdge {
  int def = 0;
  int use = 0;
  Variable var;

  auto operator<=>(const DfgEdge&) const = default;
};

class FlowGraph {
 public:
  std::map<int, FlowNode> nodes;
  std::set<CfgEdge> cfg;
  std::set<DfgEdge> dfg;
  int entry = 0;
  int exit = 0;

  const FlowNode& node(int id) const;
  bool has_node(int id) const { return nodes.count(id) != 0; }

  std::vector<const CfgEdge*> out_edges(int id) const;
  std::vector<const CfgEdge*> in_edges(int id) const;
  std::vector<int> successors(int id) const;
  std::vector<int> predecessors(int id) const;

  /// Count of statement/predicate/call-param nodes.
  std::size_t body_size() const { return nodes.size() - 2; }

  bool operator==(const FlowGraph&) const = default;
};

// ---- names -----------------------------------------------------------------

std::string_view node_kind_name(NodeKind k);
std::string_view edge_kind_name(EdgeKind k);
std::string_view jump_name(Jump j);
std::optional<NodeKind> parse_node_kind(std::string_view s);
std::optional<EdgeKind> parse_edge_kind(std::string_view s);
std::optional<Jump> parse_jump(std::string_view s);

/// Field paths (`a.b`) and array contents (`a[]`) are weakly updated: a write
/// never kills earlier definitions.
bool is_weak_variable(std::string_view v);

// ---- construction ----------------------------------------------------------

class BuildError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Control-flow graph of `method`; the dfg set is left empty.
FlowGraph build_cfg(const minij::Ast& ast, const std::string& method);

/// Reaching definitions: IN set per node as (variable, defining node) pairs.
using DefSet = std::set<std::pair<Variable, int>>;
using ReachingDefs = std::map<int, DefSet>;

ReachingDefs reaching_definitions(const FlowGraph& g);

struct DfgReport {
  /// (node, variable) uses with no reaching definition.
  std::vector<std::pair<int, Variable>> undefined_uses;
};

/// Populates g.dfg from reaching definitions: (d -> u, v) iff v is used at u
/// and (v, d) reaches u.
FlowGraph build_dfg(FlowGraph g, DfgReport* report = nullptr);

/// build_cfg followed by build_dfg.
FlowGraph build_flow_graph(const minij::Ast& ast, const std::string& method);

// ---- validation and interchange -------------------------------------------

class FormatError : public std::runtime_error {
 public:
  FormatError(std::string where, std::string what);
  std::string where;
  std::string what_failed;
};

/// Throws FormatError naming the first violated FlowGraph invariant.
void validate(const FlowGraph& g);

enum class GraphFormat { Dot, Interchange };

std::string export_graph(const FlowGraph& g, GraphFormat format);

/// Parses interchange JSON and validates it. A missing "dfg" key means the
/// DFG is computed here.
FlowGraph import_graph(std::string_view text);

/// Label normalization used for matching: whitespace dropped, numeric
/// literal spellings canonicalized, identifiers kept verbatim.
std::string normalize_label(std::string_view label);

/// Parts of a call-param node label `recv.callee(args)`.
struct CallShape {
  std::string receiver;
  std::string callee;
  std::vector<std::string> args;
};
std::optional<CallShape> split_call_label(std::string_view label);

/// Condition-evaluation call nodes hoisted directly before predicate `pred`.
std::vector<int> condition_feeders(const FlowGraph& g, int pred);

/// Nodes guarded by predicate `pred`: reachable from its branches over
/// non-jump edges, minus the join continuation shared by all branches.
std::set<int> guarded_region(const FlowGraph& g, int pred);

/// True for value-carrying return/throw nodes.
bool is_jump_node(const FlowGraph& g, int id);

}  // namespace ffc::flow
