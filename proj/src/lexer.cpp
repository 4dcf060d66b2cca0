#include "ffc/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace ffc::minij {

namespace {

constexpr std::array kKeywords = {
    "boolean", "break",  "byte",   "case",   "char",     "continue", "default",
    "double",  "else",   "false",  "final",  "float",    "for",      "if",
    "int",     "long",   "new",    "null",   "private",  "protected", "public",
    "return",  "short",  "static", "super",  "switch",   "this",     "throw",
    "true",    "var",    "void",   "while"};

// Longest first so that maximal munch is a linear scan.
constexpr std::array kOperators = {
    ">>>=", ">>>", "<<=", ">>=", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "++",   "--",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "+",  "-",
    "*",    "/",   "%",   "<",   ">",  "=",  "!",  "~",  "&",  "|",  "^",  "?",
    ":"};

constexpr std::string_view kPunctuation = "(){}[];,.";

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    return out;
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        int line = line_, col = col_;
        advance();
        advance();
        while (!(peek() == '*' && peek(1) == '/')) {
          if (pos_ >= src_.size()) throw LexError(line, col, "unterminated block comment");
          advance();
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token make(TokenKind kind, std::size_t start, int line, int col) const {
    return Token{kind, std::string(src_.substr(start, pos_ - start)), line, col, start};
  }

  Token next() {
    const std::size_t start = pos_;
    const int line = line_, col = col_;
    char c = peek();

    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(peek())) advance();
      auto tok = make(TokenKind::Identifier, start, line, col);
      if (is_keyword(tok.text)) tok.kind = TokenKind::Keyword;
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lex_number();
      return make(TokenKind::Literal, start, line, col);
    }
    if (c == '"' || c == '\'') {
      lex_quoted(c, line, col);
      return make(TokenKind::Literal, start, line, col);
    }
    for (std::string_view op : kOperators) {
      if (src_.substr(pos_, op.size()) == op) {
        for (std::size_t i = 0; i < op.size(); ++i) advance();
        return make(TokenKind::Operator, start, line, col);
      }
    }
    if (kPunctuation.find(c) != std::string_view::npos) {
      advance();
      return make(TokenKind::Punctuation, start, line, col);
    }
    throw LexError(line, col, std::string("illegal character '") + c + "'");
  }

  void lex_number() {
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      advance();
      advance();
      while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
    } else {
      while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') advance();
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
      if (peek() == 'e' || peek() == 'E') {
        advance();
        if (peek() == '+' || peek() == '-') advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
    }
    char s = peek();
    if (s == 'L' || s == 'l' || s == 'd' || s == 'D' || s == 'f' || s == 'F') advance();
  }

  void lex_quoted(char quote, int line, int col) {
    advance();
    while (peek() != quote) {
      if (pos_ >= src_.size() || peek() == '\n') {
        throw LexError(line, col, quote == '"' ? "unterminated string literal"
                                               : "unterminated character literal");
      }
      if (peek() == '\\') advance();
      if (pos_ >= src_.size()) continue;
      advance();
    }
    advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

LexError::LexError(int l, int c, const std::string& message)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + message),
      line(l),
      col(c) {}

std::string_view token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Literal: return "literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Punctuation: return "punctuation";
  }
  return "?";
}

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace ffc::minij
