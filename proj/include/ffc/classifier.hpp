// Flow-graph fault classes and the detectors that assign them.
#pragma once

#include <array>
#include <bitset>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ffc/align.hpp"
#include "ffc/flowgraph.hpp"

namespace ffc::classify {

/// Column order of the label files and frequency tables.
enum class FaultClass { Order, Jump, Call, Pred, Guard, Block, Def, Use };

inline constexpr std::size_t kClassCount = 8;
inline constexpr std::array<FaultClass, kClassCount> kAllClasses = {
    FaultClass::Order, FaultClass::Jump,  FaultClass::Call, FaultClass::Pred,
    FaultClass::Guard, FaultClass::Block, FaultClass::Def,  FaultClass::Use,
};

std::string_view class_name(FaultClass c);
std::optional<FaultClass> parse_class(std::string_view s);
bool is_control_flow(FaultClass c);

class FaultClassSet {
 public:
  FaultClassSet() = default;
  FaultClassSet(std::initializer_list<FaultClass> cs);
  static FaultClassSet from_bits(unsigned bits);

  void add(FaultClass c, std::string evidence = {});
  bool contains(FaultClass c) const { return bits_.test(static_cast<std::size_t>(c)); }
  bool empty() const { return bits_.none(); }
  std::size_t size() const { return bits_.count(); }
  unsigned bits() const { return static_cast<unsigned>(bits_.to_ulong()); }
  std::vector<FaultClass> classes() const;

  /// Node/edge references per class: "F12" (faulty node), "R7" (fixed node),
  /// "F3->5" (faulty cfg edge), "R3->5" (fixed cfg edge).
  const std::map<FaultClass, std::vector<std::string>>& evidence() const { return evidence_; }

  bool is_subset_of(const FaultClassSet& o) const { return (bits_ & ~o.bits_).none(); }
  FaultClassSet operator&(const FaultClassSet& o) const { return from_bits(bits() & o.bits()); }

  /// Class membership only; evidence is ignored.
  bool operator==(const FaultClassSet& o) const { return bits_ == o.bits_; }

  /// "{guard, jump}" in column order.
  std::string to_string() const;

 private:
  std::bitset<kClassCount> bits_;
  std::map<FaultClass, std::vector<std::string>> evidence_;
};

enum class FaultType { PureCF, PureDF, Mixed };

std::string_view fault_type_name(FaultType t);

/// Throws std::invalid_argument on an empty set.
FaultType fault_type(const FaultClassSet& s);

/// The graphs differ but no detector fired.
class UnclassifiedDiff : public std::runtime_error {
 public:
  explicit UnclassifiedDiff(std::string detail);
};

/// Shared state threaded through the detectors: nodes consumed by earlier
/// detectors, per side.
struct Masks {
  std::set<int> faulty;
  std::set<int> fixed;
  /// Nodes whose CFG edges were already explained (order detector).
  std::set<int> faulty_edges;
  std::set<int> fixed_edges;
};

struct Context {
  const flow::FlowGraph& f;
  const flow::FlowGraph& r;
  const align::Alignment& a;
  align::EdgeDiff diff;
  Masks masks;
  /// Missing calls with arguments, forwarded from call to def.
  std::vector<std::string> missing_call_args;

  Context(const flow::FlowGraph& f, const flow::FlowGraph& r, const align::Alignment& a);
};

// Individual detectors. Each appends evidence to `out` and may extend the
// masks; classify() runs them in the order listed here.
void detect_block(Context& cx, FaultClassSet& out);
void detect_guard(Context& cx, FaultClassSet& out);
void detect_pred(Context& cx, FaultClassSet& out);
void detect_order(Context& cx, FaultClassSet& out);
void detect_jump(Context& cx, FaultClassSet& out);
void detect_call(Context& cx, FaultClassSet& out);
void detect_def(Context& cx, FaultClassSet& out);
void detect_use(Context& cx, FaultClassSet& out);

/// True when the alignment shows any node or edge difference.
bool graphs_differ(const flow::FlowGraph& f, const flow::FlowGraph& r, const align::Alignment& a);

/// Runs all detectors. Empty result iff the graphs do not differ; throws
/// UnclassifiedDiff otherwise.
FaultClassSet classify(const flow::FlowGraph& f, const flow::FlowGraph& r);
FaultClassSet classify(const flow::FlowGraph& f, const flow::FlowGraph& r, const align::Alignment& a);

/// {"entry":..,"classes":[..],"fault_type":..,"evidence":{class:[..]}}
std::string classification_json(const std::string& entry, const FaultClassSet& s);

}  // namespace ffc::classify
