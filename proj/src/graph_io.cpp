#include <map>
#include <sstream>

#include "ffc/flowgraph.hpp"
#include "json.hpp"

namespace ffc::flow {

using nlohmann::json;

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

std::string join(const std::set<Variable>& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += ',';
    out += v;
  }
  return out;
}

std::string to_dot(const FlowGraph& g) {
  std::ostringstream os;
  os << "digraph flow {\n  node [fontname=\"monospace\"];\n";
  for (const auto& [id, n] : g.nodes) {
    const char* shape = "box";
    if (n.kind == NodeKind::Predicate) shape = "diamond";
    else if (n.kind == NodeKind::Entry || n.kind == NodeKind::Exit) shape = "ellipse";
    else if (n.kind == NodeKind::CallParam) shape = "box3d";
    std::string text = std::to_string(id) + ": " + n.label;
    if (!n.defs.empty()) text += "\ndef {" + join(n.defs) + "}";
    if (!n.uses.empty()) text += "\nuse {" + join(n.uses) + "}";
    os << "  n" << id << " [shape=" << shape << ", label=\"" << dot_escape(text) << "\"];\n";
  }
  for (const CfgEdge& e : g.cfg) {
    std::string text(edge_kind_name(e.kind));
    if (!e.label.empty()) text += " " + e.label;
    if (e.jump != Jump::None) text += " [" + std::string(jump_name(e.jump)) + "]";
    os << "  n" << e.src << " -> n" << e.dst << " [label=\"" << dot_escape(text) << "\"";
    if (e.is_jump()) os << ", style=bold";
    os << "];\n";
  }
  for (const DfgEdge& d : g.dfg) {
    os << "  n" << d.def << " -> n" << d.use << " [style=dashed, color=blue, label=\"" << dot_escape(d.var)
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

json to_json(const FlowGraph& g) {
  json nodes = json::array();
  for (const auto& [id, n] : g.nodes) {
    nodes.push_back({{"id", id},
                     {"kind", node_kind_name(n.kind)},
                     {"label", n.label},
                     {"line", n.line},
                     {"defs", n.defs},
                     {"uses", n.uses}});
  }
  json cfg = json::array();
  for (const CfgEdge& e : g.cfg) {
    json j = {{"src", e.src}, {"dst", e.dst}, {"kind", edge_kind_name(e.kind)}};
    if (!e.label.empty()) j["label"] = e.label;
    if (e.jump != Jump::None) j["jump"] = jump_name(e.jump);
    cfg.push_back(std::move(j));
  }
  json dfg = json::array();
  for (const DfgEdge& d : g.dfg) dfg.push_back({{"def", d.def}, {"use", d.use}, {"var", d.var}});
  return {{"nodes", nodes}, {"cfg", cfg}, {"dfg", dfg}, {"entry", g.entry}, {"exit", g.exit}};
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(where, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(where, std::string("field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

std::string export_graph(const FlowGraph& g, GraphFormat format) {
  if (format == GraphFormat::Dot) return to_dot(g);
  return to_json(g).dump(2) + "\n";
}

FlowGraph import_graph(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError("document", e.what());
  }
  if (!j.is_object()) throw FormatError("document", "expected a JSON object");

  FlowGraph g;
  g.entry = field<int>(j, "entry", "document");
  g.exit = field<int>(j, "exit", "document");
  for (const json& jn : field<json>(j, "nodes", "document")) {
    int id = field<int>(jn, "id", "node");
    std::string where = "node " + std::to_string(id);
    FlowNode n;
    n.id = id;
    auto kind = parse_node_kind(field<std::string>(jn, "kind", where));
    if (!kind) throw FormatError(where, "unknown node kind");
    n.kind = *kind;
    n.label = jn.value("label", std::string());
    n.line = jn.value("line", 0);
    n.defs = jn.value("defs", std::set<Variable>{});
    n.uses = jn.value("uses", std::set<Variable>{});
    if (!g.nodes.emplace(id, std::move(n)).second) throw FormatError(where, "duplicate node id");
  }
  for (const json& je : field<json>(j, "cfg", "document")) {
    CfgEdge e;
    e.src = field<int>(je, "src", "cfg edge");
    e.dst = field<int>(je, "dst", "cfg edge");
    std::string where = "cfg edge " + std::to_string(e.src) + "->" + std::to_string(e.dst);
    auto kind = parse_edge_kind(field<std::string>(je, "kind", where));
    if (!kind) throw FormatError(where, "unknown edge kind");
    e.kind = *kind;
    e.label = je.value("label", std::string());
    auto jump = parse_jump(je.value("jump", std::string()));
    if (!jump) throw FormatError(where, "unknown jump");
    e.jump = *jump;
    g.cfg.insert(std::move(e));
  }
  bool has_dfg = j.contains("dfg");
  if (has_dfg) {
    for (const json& jd : j.at("dfg")) {
      DfgEdge d;
      d.def = field<int>(jd, "def", "dfg edge");
      d.use = field<int>(jd, "use", "dfg edge");
      d.var = field<std::string>(jd, "var", "dfg edge");
      g.dfg.insert(std::move(d));
    }
  }
  validate(g);
  if (!has_dfg) g = build_dfg(std::move(g));
  return g;
}

}  // namespace ffc::flow
