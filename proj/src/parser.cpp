#include "ffc/parser.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace ffc::minij {

namespace {

constexpr std::array kPrimitiveTypes = {"boolean", "byte", "char", "double", "float",
                                        "int",     "long", "short", "void", "var"};
constexpr std::array kModifiers = {"public", "private", "protected", "static", "final"};
constexpr std::array kAssignOps = {"=",  "+=", "-=", "*=", "/=",  "%=",
                                   "&=", "|=", "^=", "<<=", ">>=", ">>>="};

template <typename Arr>
bool contains(const Arr& arr, std::string_view s) {
  return std::find(arr.begin(), arr.end(), s) != arr.end();
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

  Ast program() {
    Ast ast;
    while (!at_end()) ast.methods.push_back(method());
    return ast;
  }

 private:
  // ---- token helpers -------------------------------------------------------

  bool at_end() const { return pos_ >= toks_.size(); }

  const Token* peek(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() ? &toks_[pos_ + ahead] : nullptr;
  }

  bool check(std::string_view text, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t && t->kind != TokenKind::Literal && t->text == text;
  }

  bool check_kind(TokenKind kind, std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    return t && t->kind == kind;
  }

  bool accept(std::string_view text) {
    if (!check(text)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(std::string expected) const {
    if (at_end()) {
      int line = toks_.empty() ? 1 : toks_.back().line;
      int col = toks_.empty() ? 1 : toks_.back().col + static_cast<int>(toks_.back().text.size());
      throw ParseError(line, col, std::move(expected), "end of input");
    }
    const Token& t = toks_[pos_];
    throw ParseError(t.line, t.col, std::move(expected), "'" + t.text + "'");
  }

  const Token& expect(std::string_view text) {
    if (!check(text)) fail("'" + std::string(text) + "'");
    return toks_[pos_++];
  }

  const Token& expect_identifier() {
    if (!check_kind(TokenKind::Identifier)) fail("identifier");
    return toks_[pos_++];
  }

  // ---- declarations --------------------------------------------------------

  bool is_type_start(std::size_t ahead = 0) const {
    const Token* t = peek(ahead);
    if (!t) return false;
    if (t->kind == TokenKind::Keyword) return contains(kPrimitiveTypes, t->text);
    return t->kind == TokenKind::Identifier;
  }

  std::string type() {
    const Token* t = peek();
    if (!t || !is_type_start()) fail("type");
    std::string out = t->text;
    ++pos_;
    while (check(".") && check_kind(TokenKind::Identifier, 1)) {
      pos_ += 1;
      out += "." + toks_[pos_++].text;
    }
    while (check("[") && check("]", 1)) {
      pos_ += 2;
      out += "[]";
    }
    return out;
  }

  // Number of tokens making up a type starting at `ahead`, or 0.
  std::size_t type_length(std::size_t ahead) const {
    if (!is_type_start(ahead)) return 0;
    std::size_t n = 1;
    while (check(".", ahead + n) && check_kind(TokenKind::Identifier, ahead + n + 1)) n += 2;
    while (check("[", ahead + n) && check("]", ahead + n + 1)) n += 2;
    return n;
  }

  MethodDecl method() {
    while (peek() && contains(kModifiers, peek()->text)) ++pos_;
    MethodDecl m;
    if (!peek()) fail("method declaration");
    m.line = peek()->line;
    if (!(check_kind(TokenKind::Identifier) && check("(", 1))) m.return_type = type();
    m.name = expect_identifier().text;
    expect("(");
    if (!check(")")) {
      do {
        accept("final");
        Param p;
        if (check_kind(TokenKind::Identifier) && (check(",", 1) || check(")", 1))) {
          p.name = toks_[pos_++].text;
        } else {
          p.type = type();
          p.name = expect_identifier().text;
        }
        m.params.push_back(std::move(p));
      } while (accept(","));
    }
    expect(")");
    loop_depth_ = switch_depth_ = 0;
    m.body = block_body();
    check_declaration_before_use(m);
    return m;
  }

  // ---- statements ----------------------------------------------------------

  std::vector<Stmt> block_body() {
    expect("{");
    std::vector<Stmt> out;
    while (!check("}")) {
      if (at_end()) fail("'}'");
      if (accept(";")) continue;
      out.push_back(statement());
    }
    expect("}");
    return out;
  }

  std::vector<Stmt> sub_statement() {
    if (check("{")) return block_body();
    if (accept(";")) return {};
    std::vector<Stmt> out;
    out.push_back(statement());
    return out;
  }

  Stmt start(StmtKind kind) const {
    Stmt s;
    s.kind = kind;
    if (const Token* t = peek()) {
      s.line = t->line;
      s.col = t->col;
    }
    return s;
  }

  bool is_decl_start() const {
    if (check("final")) return true;
    const Token* t = peek();
    if (!t) return false;
    if (t->kind == TokenKind::Keyword && contains(kPrimitiveTypes, t->text)) return true;
    if (t->kind != TokenKind::Identifier) return false;
    std::size_t n = type_length(0);
    return n > 0 && check_kind(TokenKind::Identifier, n);
  }

  Stmt statement() {
    if (check("{")) {
      Stmt s = start(StmtKind::Block);
      s.body = block_body();
      return s;
    }
    if (check("if")) return if_statement();
    if (check("while")) return while_statement();
    if (check("for")) return for_statement();
    if (check("switch")) return switch_statement();
    if (check("break") || check("continue")) {
      bool is_break = check("break");
      Stmt s = start(is_break ? StmtKind::Break : StmtKind::Continue);
      if (is_break ? (loop_depth_ == 0 && switch_depth_ == 0) : loop_depth_ == 0) {
        const Token& t = *peek();
        throw ParseError(t.line, t.col,
                         is_break ? "break inside a loop or switch" : "continue inside a loop",
                         "'" + t.text + "'");
      }
      ++pos_;
      expect(";");
      return s;
    }
    if (check("return")) {
      Stmt s = start(StmtKind::Return);
      ++pos_;
      if (!check(";")) s.expr = expression();
      expect(";");
      return s;
    }
    if (check("throw")) {
      Stmt s = start(StmtKind::Throw);
      ++pos_;
      s.expr = expression();
      expect(";");
      return s;
    }
    Stmt s = simple_statement();
    expect(";");
    return s;
  }

  // Declarations, assignments, increments and call statements: the forms
  // allowed in for-init/update clauses as well.
  Stmt simple_statement() {
    if (is_decl_start()) {
      Stmt s = start(StmtKind::VarDecl);
      accept("final");
      s.type = type();
      s.name = expect_identifier().text;
      if (accept("=")) s.expr = expression();
      return s;
    }
    if (check("++") || check("--")) {
      Stmt s = start(StmtKind::Assign);
      s.op = toks_[pos_++].text;
      s.prefix = true;
      s.lhs = postfix();
      require_lvalue(*s.lhs);
      return s;
    }
    Stmt s = start(StmtKind::Assign);
    Expr target = postfix();
    if (peek() && peek()->kind == TokenKind::Operator && contains(kAssignOps, peek()->text)) {
      require_lvalue(target);
      s.op = toks_[pos_++].text;
      s.lhs = std::move(target);
      s.expr = expression();
      return s;
    }
    if (check("++") || check("--")) {
      require_lvalue(target);
      s.op = toks_[pos_++].text;
      s.lhs = std::move(target);
      return s;
    }
    if (target.kind != ExprKind::Call) fail("assignment or method call");
    s.kind = StmtKind::Call;
    s.expr = std::move(target);
    return s;
  }

  void require_lvalue(const Expr& e) const {
    if (e.kind == ExprKind::Name || e.kind == ExprKind::Field || e.kind == ExprKind::Index) return;
    throw ParseError(e.line, e.col, "assignable expression", print_expr(e));
  }

  Stmt if_statement() {
    Stmt s = start(StmtKind::If);
    expect("if");
    expect("(");
    s.expr = expression();
    expect(")");
    s.body = sub_statement();
    if (accept("else")) {
      s.has_else = true;
      s.else_body = sub_statement();
    }
    return s;
  }

  Stmt while_statement() {
    Stmt s = start(StmtKind::While);
    expect("while");
    expect("(");
    s.expr = expression();
    expect(")");
    ++loop_depth_;
    s.body = sub_statement();
    --loop_depth_;
    return s;
  }

  Stmt for_statement() {
    Stmt s = start(StmtKind::For);
    expect("for");
    expect("(");
    if (!check(";")) {
      do s.init.push_back(simple_statement());
      while (accept(","));
    }
    expect(";");
    if (!check(";")) s.expr = expression();
    expect(";");
    if (!check(")")) {
      do s.update.push_back(simple_statement());
      while (accept(","));
    }
    expect(")");
    ++loop_depth_;
    s.body = sub_statement();
    --loop_depth_;
    return s;
  }

  Stmt switch_statement() {
    Stmt s = start(StmtKind::Switch);
    expect("switch");
    expect("(");
    s.expr = expression();
    expect(")");
    expect("{");
    ++switch_depth_;
    while (!check("}")) {
      SwitchCase c;
      if (!peek()) fail("'case'");
      c.line = peek()->line;
      if (accept("default")) {
        // no label
      } else {
        expect("case");
        c.label = binary(1);
      }
      expect(":");
      while (!check("case") && !check("default") && !check("}")) {
        if (at_end()) fail("'}'");
        if (accept(";")) continue;
        c.body.push_back(statement());
      }
      s.cases.push_back(std::move(c));
    }
    --switch_depth_;
    expect("}");
    return s;
  }

  // ---- expressions ---------------------------------------------------------

  Expr node(ExprKind kind, const Token& at, std::string text = {}) const {
    Expr e;
    e.kind = kind;
    e.text = std::move(text);
    e.line = at.line;
    e.col = at.col;
    return e;
  }

  Expr expression() { return ternary(); }

  Expr ternary() {
    Expr cond = binary(1);
    if (!check("?")) return cond;
    const Token& q = toks_[pos_++];
    Expr e = node(ExprKind::Ternary, q);
    e.line = cond.line;
    e.col = cond.col;
    Expr a = ternary();
    expect(":");
    Expr b = ternary();
    e.args = {std::move(cond), std::move(a), std::move(b)};
    return e;
  }

  Expr binary(int min_prec) {
    Expr lhs = unary();
    while (true) {
      const Token* t = peek();
      if (!t || t->kind != TokenKind::Operator) break;
      int prec = binary_precedence(t->text);
      if (prec == 0 || prec < min_prec) break;
      std::string op = t->text;
      ++pos_;
      Expr rhs = binary(prec + 1);
      Expr e;
      e.kind = ExprKind::Binary;
      e.text = op;
      e.line = lhs.line;
      e.col = lhs.col;
      e.args = {std::move(lhs), std::move(rhs)};
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr unary() {
    if (check("!") || check("-") || check("~") || check("+")) {
      const Token& t = toks_[pos_++];
      Expr e = node(ExprKind::Unary, t, t.text);
      e.args.push_back(unary());
      return e;
    }
    return postfix();
  }

  std::vector<Expr> arguments() {
    std::vector<Expr> out;
    expect("(");
    if (!check(")")) {
      do out.push_back(expression());
      while (accept(","));
    }
    expect(")");
    return out;
  }

  Expr postfix() {
    Expr e = primary();
    while (true) {
      if (check(".")) {
        ++pos_;
        const Token& member = expect_identifier();
        if (check("(")) {
          Expr call = node(ExprKind::Call, member, member.text);
          call.line = e.line;
          call.col = e.col;
          call.has_receiver = true;
          call.args.push_back(std::move(e));
          for (Expr& a : arguments()) call.args.push_back(std::move(a));
          e = std::move(call);
        } else {
          Expr f = node(ExprKind::Field, member, member.text);
          f.line = e.line;
          f.col = e.col;
          f.args.push_back(std::move(e));
          e = std::move(f);
        }
      } else if (check("[")) {
        ++pos_;
        Expr idx;
        idx.kind = ExprKind::Index;
        idx.line = e.line;
        idx.col = e.col;
        idx.args.push_back(std::move(e));
        idx.args.push_back(expression());
        expect("]");
        e = std::move(idx);
      } else {
        return e;
      }
    }
  }

  Expr primary() {
    const Token* t = peek();
    if (!t) fail("expression");
    if (t->kind == TokenKind::Literal) {
      ++pos_;
      return node(ExprKind::Literal, *t, t->text);
    }
    if (t->kind == TokenKind::Keyword) {
      if (t->text == "null" || t->text == "true" || t->text == "false") {
        ++pos_;
        return node(ExprKind::Literal, *t, t->text);
      }
      if (t->text == "this" || t->text == "super") {
        ++pos_;
        if (check("(")) {
          Expr call = node(ExprKind::Call, *t, t->text);
          call.args = arguments();
          return call;
        }
        return node(t->text == "this" ? ExprKind::This : ExprKind::Super, *t);
      }
      if (t->text == "new") return creation();
      fail("expression");
    }
    if (t->kind == TokenKind::Identifier) {
      ++pos_;
      if (check("(")) {
        Expr call = node(ExprKind::Call, *t, t->text);
        call.args = arguments();
        return call;
      }
      return node(ExprKind::Name, *t, t->text);
    }
    if (check("(")) {
      ++pos_;
      Expr e = expression();
      expect(")");
      return e;
    }
    fail("expression");
  }

  Expr creation() {
    const Token& kw = expect("new");
    const Token* t = peek();
    if (!is_type_start()) fail("type");
    std::string name = t->text;
    ++pos_;
    while (check(".") && check_kind(TokenKind::Identifier, 1)) {
      pos_ += 1;
      name += "." + toks_[pos_++].text;
    }
    if (check("[")) {
      Expr e = node(ExprKind::NewArray, kw, name);
      while (accept("[")) {
        e.args.push_back(expression());
        expect("]");
      }
      return e;
    }
    Expr e = node(ExprKind::New, kw, name);
    e.args = arguments();
    return e;
  }

  // ---- semantic checks -----------------------------------------------------

  struct Pos {
    int line, col;
    bool operator<(const Pos& o) const { return line != o.line ? line < o.line : col < o.col; }
  };

  static void collect_decls(const std::vector<Stmt>& stmts, std::map<std::string, Pos>& decls) {
    for (const Stmt& s : stmts) {
      if (s.kind == StmtKind::VarDecl) {
        auto [it, fresh] = decls.emplace(s.name, Pos{s.line, s.col});
        if (!fresh && Pos{s.line, s.col} < it->second) it->second = Pos{s.line, s.col};
      }
      collect_decls(s.init, decls);
      collect_decls(s.body, decls);
      collect_decls(s.else_body, decls);
      collect_decls(s.update, decls);
      for (const SwitchCase& c : s.cases) collect_decls(c.body, decls);
    }
  }

  static void check_expr(const Expr& e, const std::map<std::string, Pos>& decls) {
    if (e.kind == ExprKind::Name) {
      auto it = decls.find(e.text);
      if (it != decls.end() && Pos{e.line, e.col} < it->second) {
        throw ParseError(e.line, e.col, "declaration of '" + e.text + "' before use",
                         "'" + e.text + "'");
      }
    }
    for (const Expr& a : e.args) check_expr(a, decls);
  }

  static void check_stmts(const std::vector<Stmt>& stmts, const std::map<std::string, Pos>& decls) {
    for (const Stmt& s : stmts) {
      if (s.lhs) check_expr(*s.lhs, decls);
      if (s.expr) check_expr(*s.expr, decls);
      for (const SwitchCase& c : s.cases) {
        if (c.label) check_expr(*c.label, decls);
        check_stmts(c.body, decls);
      }
      check_stmts(s.init, decls);
      check_stmts(s.body, decls);
      check_stmts(s.else_body, decls);
      check_stmts(s.update, decls);
    }
  }

  static void check_declaration_before_use(const MethodDecl& m) {
    std::map<std::string, Pos> decls;
    collect_decls(m.body, decls);
    for (const Param& p : m.params) decls.erase(p.name);
    check_stmts(m.body, decls);
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  int loop_depth_ = 0;
  int switch_depth_ = 0;
};

// ---- printing --------------------------------------------------------------

int expr_precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Ternary: return 0;
    case ExprKind::Binary: return binary_precedence(e.text);
    case ExprKind::Unary: return 12;
    default: return 13;
  }
}

void print_expr_to(const Expr& e, std::string& out);

void print_operand(const Expr& e, int min_prec, std::string& out) {
  if (expr_precedence(e) < min_prec) {
    out += '(';
    print_expr_to(e, out);
    out += ')';
  } else {
    print_expr_to(e, out);
  }
}

void print_list(const std::vector<Expr>& args, std::size_t from, std::string& out) {
  out += '(';
  for (std::size_t i = from; i < args.size(); ++i) {
    if (i > from) out += ", ";
    print_expr_to(args[i], out);
  }
  out += ')';
}

void print_expr_to(const Expr& e, std::string& out) {
  switch (e.kind) {
    case ExprKind::Literal:
    case ExprKind::Name: out += e.text; break;
    case ExprKind::This: out += "this"; break;
    case ExprKind::Super: out += "super"; break;
    case ExprKind::Field:
      print_operand(e.args[0], 13, out);
      out += '.';
      out += e.text;
      break;
    case ExprKind::Index:
      print_operand(e.args[0], 13, out);
      out += '[';
      print_expr_to(e.args[1], out);
      out += ']';
      break;
    case ExprKind::Call:
      if (e.has_receiver) {
        print_operand(e.args[0], 13, out);
        out += '.';
      }
      out += e.text;
      print_list(e.args, e.has_receiver ? 1 : 0, out);
      break;
    case ExprKind::New:
      out += "new " + e.text;
      print_list(e.args, 0, out);
      break;
    case ExprKind::NewArray:
      out += "new " + e.text;
      for (const Expr& d : e.args) {
        out += '[';
        print_expr_to(d, out);
        out += ']';
      }
      break;
    case ExprKind::Unary:
      out += e.text;
      // keep "- -x" from fusing into "--x"
      if (e.args[0].kind == ExprKind::Unary && (e.text == "-" || e.text == "+")) out += ' ';
      print_operand(e.args[0], 12, out);
      break;
    case ExprKind::Binary: {
      int prec = binary_precedence(e.text);
      print_operand(e.args[0], prec, out);
      out += ' ' + e.text + ' ';
      print_operand(e.args[1], prec + 1, out);
      break;
    }
    case ExprKind::Ternary:
      print_operand(e.args[0], 1, out);
      out += " ? ";
      print_operand(e.args[1], 0, out);
      out += " : ";
      print_operand(e.args[2], 0, out);
      break;
  }
}

std::string simple_stmt(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::VarDecl: {
      std::string out = s.type + " " + s.name;
      if (s.expr) out += " = " + print_expr(*s.expr);
      return out;
    }
    case StmtKind::Assign:
      if (s.op == "++" || s.op == "--") {
        return s.prefix ? s.op + print_expr(*s.lhs) : print_expr(*s.lhs) + s.op;
      }
      return print_expr(*s.lhs) + " " + s.op + " " + print_expr(*s.expr);
    case StmtKind::Call: return print_expr(*s.expr);
    default: return {};
  }
}

void print_block(const std::vector<Stmt>& body, int depth, std::string& out);

void print_stmt(const Stmt& s, int depth, std::string& out) {
  std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
  switch (s.kind) {
    case StmtKind::VarDecl:
    case StmtKind::Assign:
    case StmtKind::Call: out += pad + simple_stmt(s) + ";\n"; break;
    case StmtKind::Break: out += pad + "break;\n"; break;
    case StmtKind::Continue: out += pad + "continue;\n"; break;
    case StmtKind::Return:
      out += pad + (s.expr ? "return " + print_expr(*s.expr) : std::string("return")) + ";\n";
      break;
    case StmtKind::Throw: out += pad + "throw " + print_expr(*s.expr) + ";\n"; break;
    case StmtKind::Block:
      out += pad;
      print_block(s.body, depth, out);
      out += "\n";
      break;
    case StmtKind::If:
      out += pad + "if (" + print_expr(*s.expr) + ") ";
      print_block(s.body, depth, out);
      if (s.has_else) {
        out += " else ";
        print_block(s.else_body, depth, out);
      }
      out += "\n";
      break;
    case StmtKind::While:
      out += pad + "while (" + print_expr(*s.expr) + ") ";
      print_block(s.body, depth, out);
      out += "\n";
      break;
    case StmtKind::For: {
      out += pad + "for (";
      for (std::size_t i = 0; i < s.init.size(); ++i) out += (i ? ", " : "") + simple_stmt(s.init[i]);
      out += "; ";
      if (s.expr) out += print_expr(*s.expr);
      out += "; ";
      for (std::size_t i = 0; i < s.update.size(); ++i) {
        out += (i ? ", " : "") + simple_stmt(s.update[i]);
      }
      out += ") ";
      print_block(s.body, depth, out);
      out += "\n";
      break;
    }
    case StmtKind::Switch:
      out += pad + "switch (" + print_expr(*s.expr) + ") {\n";
      for (const SwitchCase& c : s.cases) {
        out += pad + (c.label ? "    case " + print_expr(*c.label) + ":\n" : "    default:\n");
        for (const Stmt& b : c.body) print_stmt(b, depth + 2, out);
      }
      out += pad + "}\n";
      break;
  }
}

void print_block(const std::vector<Stmt>& body, int depth, std::string& out) {
  out += "{\n";
  for (const Stmt& s : body) print_stmt(s, depth + 1, out);
  out += std::string(static_cast<std::size_t>(depth) * 4, ' ') + "}";
}

template <typename T, typename Eq>
bool all_equivalent(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!eq(a[i], b[i])) return false;
  }
  return true;
}

bool opt_equivalent(const std::optional<Expr>& a, const std::optional<Expr>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || equivalent(*a, *b);
}

}  // namespace

ParseError::ParseError(int l, int c, std::string exp, std::string fnd)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": expected " + exp +
                         ", found " + fnd),
      line(l),
      col(c),
      expected(std::move(exp)),
      found(std::move(fnd)) {}

int binary_precedence(std::string_view op) {
  static const std::map<std::string_view, int> table = {
      {"||", 2}, {"&&", 3}, {"|", 4},  {"^", 5},  {"&", 6},   {"==", 7}, {"!=", 7},
      {"<", 8},  {">", 8},  {"<=", 8}, {">=", 8}, {"<<", 9},  {">>", 9}, {">>>", 9},
      {"+", 10}, {"-", 10}, {"*", 11}, {"/", 11}, {"%", 11}};
  auto it = table.find(op);
  return it == table.end() ? 0 : it->second;
}

Ast parse(const std::vector<Token>& tokens) { return Parser(tokens).program(); }

Ast parse_source(std::string_view source) { return parse(tokenize(source)); }

std::string print_expr(const Expr& e) {
  std::string out;
  print_expr_to(e, out);
  return out;
}

std::string print_program(const Ast& ast) {
  std::string out;
  for (std::size_t i = 0; i < ast.methods.size(); ++i) {
    const MethodDecl& m = ast.methods[i];
    if (i) out += "\n";
    if (!m.return_type.empty()) out += m.return_type + " ";
    out += m.name + "(";
    for (std::size_t p = 0; p < m.params.size(); ++p) {
      if (p) out += ", ";
      if (!m.params[p].type.empty()) out += m.params[p].type + " ";
      out += m.params[p].name;
    }
    out += ") ";
    print_block(m.body, 0, out);
    out += "\n";
  }
  return out;
}

std::vector<Expr> Expr::call_args() const {
  return {args.begin() + (has_receiver ? 1 : 0), args.end()};
}

const MethodDecl* Ast::find_method(const std::string& name) const {
  for (const MethodDecl& m : methods) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

bool equivalent(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.text == b.text && a.has_receiver == b.has_receiver &&
         all_equivalent(a.args, b.args, [](const Expr& x, const Expr& y) { return equivalent(x, y); });
}

bool equivalent(const Stmt& a, const Stmt& b) {
  auto stmts_eq = [](const Stmt& x, const Stmt& y) { return equivalent(x, y); };
  if (a.kind != b.kind || a.op != b.op || a.prefix != b.prefix || a.type != b.type ||
      a.name != b.name || a.has_else != b.has_else)
    return false;
  if (!opt_equivalent(a.lhs, b.lhs) || !opt_equivalent(a.expr, b.expr)) return false;
  if (!all_equivalent(a.body, b.body, stmts_eq) || !all_equivalent(a.else_body, b.else_body, stmts_eq) ||
      !all_equivalent(a.init, b.init, stmts_eq) || !all_equivalent(a.update, b.update, stmts_eq))
    return false;
  return all_equivalent(a.cases, b.cases, [&](const SwitchCase& x, const SwitchCase& y) {
    return opt_equivalent(x.label, y.label) && all_equivalent(x.body, y.body, stmts_eq);
  });
}

bool equivalent(const Ast& a, const Ast& b) {
  return all_equivalent(a.methods, b.methods, [](const MethodDecl& x, const MethodDecl& y) {
    if (x.name != y.name || x.return_type != y.return_type || x.params.size() != y.params.size())
      return false;
    for (std::size_t i = 0; i < x.params.size(); ++i) {
      if (x.params[i].name != y.params[i].name || x.params[i].type != y.params[i].type) return false;
    }
    return all_equivalent(x.body, y.body, [](const Stmt& p, const Stmt& q) { return equivalent(p, q); });
  });
}

}  // namespace ffc::minij
