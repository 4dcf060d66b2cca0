// Lowering of a MiniJ method into its control-flow graph.

#include <cctype>

#include "ffc/flowgraph.hpp"
#include "ffc/parser.hpp"

namespace ffc::flow {

namespace {

using minij::Expr;
using minij::ExprKind;
using minij::Stmt;
using minij::StmtKind;

// Pending outgoing edge of an already emitted node.
struct Stub {
  int src;
  EdgeKind kind;
  std::string label;
  Jump jump = Jump::None;
};
using Stubs = std::vector<Stub>;

std::optional<std::string> access_path(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Name: return e.text;
    case ExprKind::This: return std::string("this");
    case ExprKind::Field:
      if (auto base = access_path(e.args[0])) return *base + "." + e.text;
      return std::nullopt;
    default: return std::nullopt;
  }
}

void collect_uses(const Expr& e, std::set<Variable>& out) {
  switch (e.kind) {
    case ExprKind::Literal:
    case ExprKind::This:
    case ExprKind::Super: return;
    case ExprKind::Name: out.insert(e.text); return;
    case ExprKind::Field:
      if (auto p = access_path(e)) {
        out.insert(*p);
      } else {
        collect_uses(e.args[0], out);
      }
      return;
    case ExprKind::Index:
      if (auto p = access_path(e.args[0])) {
        out.insert(*p + "[]");
      } else {
        collect_uses(e.args[0], out);
      }
      collect_uses(e.args[1], out);
      return;
    case ExprKind::Call: out.insert(std::string(kRetVar)); return;
    default:
      for (const Expr& a : e.args) collect_uses(a, out);
  }
}

// Receivers spelled with a leading capital are taken to be type names
// (`Integer.parseInt`), not variables.
bool is_type_receiver(const Expr& r) {
  if (r.kind != ExprKind::Name && r.kind != ExprKind::Field) return false;
  auto p = access_path(r);
  return p && std::isupper(static_cast<unsigned char>((*p)[0]));
}

struct LoopTarget {
  bool is_loop = false;
  Stubs breaks;
  Stubs continues;
};

class Builder {
 public:
  Builder(const minij::Ast& ast, const minij::MethodDecl& m) : ast_(ast), method_(m) {}

  FlowGraph run() {
    g_.entry = add_node(NodeKind::Entry, "entry", method_.line);
    Stubs dangling = lower(method_.body, {Stub{g_.entry, EdgeKind::Seq, {}}});
    for (Stub& s : returns_) dangling.push_back(std::move(s));
    int last_line = method_.line;
    for (const auto& [id, n] : g_.nodes) last_line = std::max(last_line, n.line);
    g_.exit = add_node(NodeKind::Exit, "exit", last_line + 1);
    connect(dangling, g_.exit);
    g_.nodes.at(g_.entry).defs = external_inputs();
    return std::move(g_);
  }

 private:
  int add_node(NodeKind kind, std::string label, int line) {
    FlowNode n;
    n.id = next_id_++;
    n.kind = kind;
    n.label = std::move(label);
    n.line = line;
    g_.nodes.emplace(n.id, std::move(n));
    return next_id_ - 1;
  }

  void connect(const Stubs& stubs, int target) {
    for (const Stub& s : stubs) g_.cfg.insert(CfgEdge{s.src, target, s.kind, s.label, s.jump});
  }

  // Emits a node after `dangling` and returns it.
  int emit(Stubs& dangling, NodeKind kind, std::string label, int line, EdgeKind out_kind) {
    int id = add_node(kind, std::move(label), line);
    connect(dangling, id);
    dangling = {Stub{id, out_kind, {}}};
    return id;
  }

  static Stubs jumpify(Stubs stubs, Jump j, EdgeKind jump_kind) {
    for (Stub& s : stubs) {
      if (s.kind == EdgeKind::Seq || s.kind == EdgeKind::Fallthrough) {
        s.kind = jump_kind;
      } else {
        s.jump = j;
      }
    }
    return stubs;
  }

  const minij::MethodDecl* known_callee(const Expr& call) const {
    if (call.text == "this" || call.text == "super") return nullptr;
    if (call.has_receiver && call.args[0].kind != ExprKind::This) return nullptr;
    const minij::MethodDecl* m = ast_.find_method(call.text);
    if (!m || m->params.size() != call.call_args().size()) return nullptr;
    return m;
  }

  // Hoists every call in `e` (innermost first) into call-param nodes.
  void hoist_calls(const Expr& e, Stubs& dangling, bool consumed) {
    for (const Expr& a : e.args) hoist_calls(a, dangling, true);
    if (e.kind != ExprKind::Call) return;
    int id = emit(dangling, NodeKind::CallParam, minij::print_expr(e), e.line, EdgeKind::Call);
    FlowNode& n = g_.nodes.at(id);
    if (const Expr* r = e.receiver(); r && !is_type_receiver(*r)) collect_uses(*r, n.uses);
    for (const Expr& a : e.call_args()) collect_uses(a, n.uses);
    if (const minij::MethodDecl* callee = known_callee(e)) {
      for (const minij::Param& p : callee->params) n.defs.insert(callee->name + "::" + p.name);
    }
    if (consumed) n.defs.insert(std::string(kRetVar));
  }

  void lvalue(const Expr& lhs, std::set<Variable>& defs, std::set<Variable>& uses, bool compound) {
    if (lhs.kind == ExprKind::Index) {
      if (auto p = access_path(lhs.args[0])) {
        defs.insert(*p + "[]");
        if (compound) uses.insert(*p + "[]");
      } else {
        collect_uses(lhs.args[0], uses);
      }
      collect_uses(lhs.args[1], uses);
      return;
    }
    if (auto p = access_path(lhs)) {
      defs.insert(*p);
      if (compound) uses.insert(*p);
    } else {
      collect_uses(lhs.args[0], uses);
    }
  }

  int emit_simple(const Stmt& s, Stubs& dangling) {
    std::set<Variable> defs, uses;
    std::string label;
    switch (s.kind) {
      case StmtKind::VarDecl:
        hoist_calls(*s.expr, dangling, true);
        defs.insert(s.name);
        collect_uses(*s.expr, uses);
        label = s.type + " " + s.name + " = " + minij::print_expr(*s.expr);
        break;
      case StmtKind::Assign:
        if (s.lhs) hoist_calls(*s.lhs, dangling, true);
        if (s.op == "++" || s.op == "--") {
          lvalue(*s.lhs, defs, uses, true);
          label = s.prefix ? s.op + minij::print_expr(*s.lhs) : minij::print_expr(*s.lhs) + s.op;
        } else {
          hoist_calls(*s.expr, dangling, true);
          lvalue(*s.lhs, defs, uses, s.op != "=");
          collect_uses(*s.expr, uses);
          label = minij::print_expr(*s.lhs) + " " + s.op + " " + minij::print_expr(*s.expr);
        }
        break;
      default: throw BuildError("not a simple statement");
    }
    int id = emit(dangling, NodeKind::Statement, std::move(label), s.line, EdgeKind::Seq);
    g_.nodes.at(id).defs = std::move(defs);
    g_.nodes.at(id).uses = std::move(uses);
    return id;
  }

  // Condition calls, then the predicate node.
  int emit_predicate(const std::string& label, const Expr& cond, int line, Stubs& dangling) {
    hoist_calls(cond, dangling, true);
    int id = add_node(NodeKind::Predicate, label, line);
    connect(dangling, id);
    dangling.clear();
    collect_uses(cond, g_.nodes.at(id).uses);
    return id;
  }

  Stubs lower(const std::vector<Stmt>& stmts, Stubs dangling) {
    for (const Stmt& s : stmts) {
      if (dangling.empty()) break;  // unreachable code
      dangling = lower(s, std::move(dangling));
    }
    return dangling;
  }

  Stubs lower(const Stmt& s, Stubs dangling) {
    if (dangling.empty()) return dangling;
    switch (s.kind) {
      case StmtKind::Block: return lower(s.body, std::move(dangling));
      case StmtKind::VarDecl:
        if (!s.expr) return dangling;  // declaration without initializer executes nothing
        emit_simple(s, dangling);
        return dangling;
      case StmtKind::Assign: emit_simple(s, dangling); return dangling;
      case StmtKind::Call: hoist_calls(*s.expr, dangling, false); return dangling;
      case StmtKind::If: {
        int p = emit_predicate("if (" + minij::print_expr(*s.expr) + ")", *s.expr, s.line, dangling);
        Stubs out = lower(s.body, {Stub{p, EdgeKind::True, {}}});
        Stubs other = s.has_else ? lower(s.else_body, {Stub{p, EdgeKind::False, {}}})
                                 : Stubs{Stub{p, EdgeKind::False, {}}};
        out.insert(out.end(), other.begin(), other.end());
        return out;
      }
      case StmtKind::While: {
        int first = next_id_;
        int p = emit_predicate("while (" + minij::print_expr(*s.expr) + ")", *s.expr, s.line, dangling);
        targets_.push_back(LoopTarget{true, {}, {}});
        Stubs body = lower(s.body, {Stub{p, EdgeKind::True, {}}});
        LoopTarget t = std::move(targets_.back());
        targets_.pop_back();
        connect(body, first);
        connect(t.continues, first);
        Stubs out = {Stub{p, EdgeKind::False, {}}};
        out.insert(out.end(), t.breaks.begin(), t.breaks.end());
        return out;
      }
      case StmtKind::For: {
        for (const Stmt& i : s.init) dangling = lower(i, std::move(dangling));
        int first = next_id_;
        int p;
        if (s.expr) {
          p = emit_predicate("for (" + minij::print_expr(*s.expr) + ")", *s.expr, s.line, dangling);
        } else {
          Expr always;
          always.kind = ExprKind::Literal;
          always.text = "true";
          p = emit_predicate("for (true)", always, s.line, dangling);
        }
        targets_.push_back(LoopTarget{true, {}, {}});
        Stubs body = lower(s.body, {Stub{p, EdgeKind::True, {}}});
        LoopTarget t = std::move(targets_.back());
        targets_.pop_back();
        body.insert(body.end(), t.continues.begin(), t.continues.end());
        for (const Stmt& u : s.update) body = lower(u, std::move(body));
        connect(body, first);
        Stubs out = {Stub{p, EdgeKind::False, {}}};
        out.insert(out.end(), t.breaks.begin(), t.breaks.end());
        return out;
      }
      case StmtKind::Switch: {
        int p = emit_predicate("switch (" + minij::print_expr(*s.expr) + ")", *s.expr, s.line, dangling);
        targets_.push_back(LoopTarget{false, {}, {}});
        Stubs prev;
        bool has_default = false;
        for (const minij::SwitchCase& c : s.cases) {
          Stubs entering;
          for (Stub st : prev) {
            if (st.kind == EdgeKind::Seq) st.kind = EdgeKind::Fallthrough;
            entering.push_back(std::move(st));
          }
          if (c.label) {
            entering.push_back(Stub{p, EdgeKind::Case, minij::print_expr(*c.label)});
          } else {
            has_default = true;
            entering.push_back(Stub{p, EdgeKind::False, {}});
          }
          prev = lower(c.body, std::move(entering));
        }
        LoopTarget t = std::move(targets_.back());
        targets_.pop_back();
        Stubs out = std::move(prev);
        out.insert(out.end(), t.breaks.begin(), t.breaks.end());
        if (!has_default) out.push_back(Stub{p, EdgeKind::False, {}});
        return out;
      }
      case StmtKind::Break: {
        LoopTarget& t = targets_.back();
        Stubs j = jumpify(std::move(dangling), Jump::Break, EdgeKind::JumpBreak);
        t.breaks.insert(t.breaks.end(), j.begin(), j.end());
        return {};
      }
      case StmtKind::Continue: {
        for (auto it = targets_.rbegin(); it != targets_.rend(); ++it) {
          if (!it->is_loop) continue;
          Stubs j = jumpify(std::move(dangling), Jump::Continue, EdgeKind::JumpContinue);
          it->continues.insert(it->continues.end(), j.begin(), j.end());
          break;
        }
        return {};
      }
      case StmtKind::Return:
      case StmtKind::Throw: {
        const bool is_return = s.kind == StmtKind::Return;
        const Jump j = is_return ? Jump::Return : Jump::Throw;
        const EdgeKind k = is_return ? EdgeKind::JumpReturn : EdgeKind::JumpThrow;
        if (!s.expr) {
          Stubs js = jumpify(std::move(dangling), j, k);
          returns_.insert(returns_.end(), js.begin(), js.end());
          return {};
        }
        hoist_calls(*s.expr, dangling, true);
        int id = emit(dangling, NodeKind::Statement,
                      (is_return ? "return " : "throw ") + minij::print_expr(*s.expr), s.line, k);
        FlowNode& n = g_.nodes.at(id);
        n.defs.insert(std::string(is_return ? kRetVar : kExcVar));
        collect_uses(*s.expr, n.uses);
        returns_.insert(returns_.end(), dangling.begin(), dangling.end());
        return {};
      }
    }
    return dangling;
  }

  static void declared_locals(const std::vector<Stmt>& stmts, std::set<std::string>& out) {
    for (const Stmt& s : stmts) {
      if (s.kind == StmtKind::VarDecl) out.insert(s.name);
      declared_locals(s.init, out);
      declared_locals(s.body, out);
      declared_locals(s.else_body, out);
      declared_locals(s.update, out);
      for (const minij::SwitchCase& c : s.cases) declared_locals(c.body, out);
    }
  }

  // Parameters, plus every heap location or undeclared name the body reads.
  std::set<Variable> external_inputs() const {
    std::set<std::string> locals;
    declared_locals(method_.body, locals);
    std::set<Variable> out;
    for (const minij::Param& p : method_.params) out.insert(p.name);
    for (const auto& [id, n] : g_.nodes) {
      for (const Variable& v : n.uses) {
        if (v == kRetVar || v == kExcVar || v.find("::") != std::string::npos) continue;
        if (locals.count(v) && !is_weak_variable(v)) continue;
        out.insert(v);
      }
    }
    return out;
  }

  const minij::Ast& ast_;
  const minij::MethodDecl& method_;
  FlowGraph g_;
  int next_id_ = 0;
  std::vector<LoopTarget> targets_;
  Stubs returns_;
};

}  // namespace

FlowGraph build_cfg(const minij::Ast& ast, const std::string& method) {
  const minij::MethodDecl* m = ast.find_method(method);
  if (!m) throw BuildError("no method named '" + method + "'");
  return Builder(ast, *m).run();
}

FlowGraph build_flow_graph(const minij::Ast& ast, const std::string& method) {
  return build_dfg(build_cfg(ast, method));
}

}  // namespace ffc::flow
