// Tokenizer for MiniJ, the Java-flavoured subset the toolkit analyzes.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ffc::minij {

enum class TokenKind { Keyword, Identifier, Literal, Operator, Punctuation };

struct Token {
  TokenKind kind;
  std::string text;
  int line = 1;
  int col = 1;
  /// Byte offset of the first character in the source.
  std::size_t offset = 0;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
};

class LexError : public std::runtime_error {
 public:
  LexError(int line, int col, const std::string& message);
  int line;
  int col;
};

std::string_view token_kind_name(TokenKind kind);
bool is_keyword(std::string_view word);

/// Splits `source` into tokens. Whitespace and comments are skipped; the
/// skipped text plus the token texts reconstruct the source exactly.
std::vector<Token> tokenize(std::string_view source);

}  // namespace ffc::minij
