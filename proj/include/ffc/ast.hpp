// MiniJ abstract syntax tree.
//
// Nodes are plain value types. Expressions and statements are homogeneous
// structs tagged by a kind enum; which fields are meaningful depends on the
// kind (documented per enumerator).
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ffc::minij {

enum class ExprKind {
  Literal,   // text = spelling (numbers, chars, strings, null, true, false)
  Name,      // text = identifier
  This,      // `this`
  Super,     // `super`
  Field,     // text = member; args[0] = base
  Index,     // args[0] = base, args[1] = index
  Call,      // text = callee; args[0] = receiver when has_receiver, then arguments
  New,       // text = type; args = constructor arguments
  NewArray,  // text = element type; args = dimension expressions
  Unary,     // text = operator; args[0] = operand
  Binary,    // text = operator; args[0] lhs, args[1] rhs
  Ternary,   // args = cond, then, else
};

struct Expr {
  ExprKind kind = ExprKind::Literal;
  std::string text;
  std::vector<Expr> args;
  bool has_receiver = false;
  int line = 0;
  int col = 0;

  /// Arguments of a call, i.e. args without the receiver.
  std::vector<Expr> call_args() const;
  const Expr* receiver() const { return has_receiver ? &args.front() : nullptr; }
};

enum class StmtKind {
  Assign,    // lhs op expr; op is "=", "+=", ... or "++"/"--" (prefix flag)
  VarDecl,   // type name [= expr]
  Call,      // expr is a Call expression evaluated for effect
  If,        // expr = condition; body = then; else_body when has_else
  While,     // expr = condition; body
  For,       // init; optional expr condition; update; body
  Switch,    // expr = scrutinee; cases
  Break,
  Continue,
  Return,    // optional expr
  Throw,     // expr
  Block,     // body
};

struct SwitchCase;

struct Stmt {
  StmtKind kind = StmtKind::Block;
  int line = 0;
  int col = 0;

  std::string op;
  bool prefix = false;
  std::string type;
  std::string name;
  std::optional<Expr> lhs;
  std::optional<Expr> expr;

  std::vector<Stmt> body;
  std::vector<Stmt> else_body;
  bool has_else = false;

  std::vector<Stmt> init;
  std::vector<Stmt> update;
  std::vector<SwitchCase> cases;
};

struct SwitchCase {
  /// Empty for `default`.
  std::optional<Expr> label;
  std::vector<Stmt> body;
  int line = 0;
};

struct Param {
  std::string type;
  std::string name;
};

struct MethodDecl {
  std::string return_type;  // empty for constructors
  std::string name;
  std::vector<Param> params;
  std::vector<Stmt> body;
  int line = 0;
};

struct Ast {
  std::vector<MethodDecl> methods;

  const MethodDecl* find_method(const std::string& name) const;
};

/// Structural equality ignoring source positions.
bool equivalent(const Expr& a, const Expr& b);
bool equivalent(const Stmt& a, const Stmt& b);
bool equivalent(const Ast& a, const Ast& b);

}  // namespace ffc::minij
