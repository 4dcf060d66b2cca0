#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ffc/ast.hpp"
#include "ffc/lexer.hpp"

namespace ffc::minij {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, std::string expected, std::string found);
  int line;
  int col;
  std::string expected;
  std::string found;
};

/// Recursive-descent parser over the token stream. Grammar: docs/grammar.md.
Ast parse(const std::vector<Token>& tokens);

/// tokenize + parse.
Ast parse_source(std::string_view source);

/// Canonical MiniJ rendering. Reparsing the output yields an equivalent Ast.
std::string print_expr(const Expr& e);
std::string print_program(const Ast& ast);

/// Binding strength of a binary operator (higher binds tighter), 0 if unknown.
int binary_precedence(std::string_view op);

}  // namespace ffc::minij
