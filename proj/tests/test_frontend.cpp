#include <string>

#include "doctest.h"
#include "ffc/lexer.hpp"
#include "ffc/parser.hpp"
#include "oracles.hpp"

using namespace ffc::minij;

TEST_CASE("empty source has no tokens") { CHECK(tokenize("").empty()); }

TEST_CASE("token kinds and positions") {
  auto toks = tokenize("x = a.b >>> 2; // tail\n/* c */ y");
  REQUIRE(toks.size() == 9);
  CHECK(toks[0].kind == TokenKind::Identifier);
  CHECK(toks[1].text == "=");
  CHECK(toks[3].kind == TokenKind::Punctuation);
  CHECK(toks[5].text == ">>>");
  CHECK(toks[6].kind == TokenKind::Literal);
  CHECK(toks[8].text == "y");
  CHECK(toks[8].line == 2);
  CHECK(toks[8].col == 9);
}

TEST_CASE("token texts plus skipped trivia reconstruct the source") {
  for (std::uint32_t seed = 1; seed <= 40; ++seed) {
    std::string src = oracle::ProgramGen(seed).program();
    auto toks = tokenize(src);
    std::size_t at = 0;
    for (const Token& t : toks) {
      REQUIRE(src.compare(t.offset, t.text.size(), t.text) == 0);
      for (std::size_t i = at; i < t.offset; ++i) CHECK(std::isspace(static_cast<unsigned char>(src[i])));
      at = t.offset + t.text.size();
    }
  }
}

TEST_CASE("positions increase in lexical order") {
  auto toks = tokenize(oracle::ProgramGen(7).program());
  for (std::size_t i = 1; i < toks.size(); ++i) {
    bool later = toks[i].line > toks[i - 1].line ||
                 (toks[i].line == toks[i - 1].line && toks[i].col > toks[i - 1].col);
    CHECK(later);
    CHECK(!toks[i].text.empty());
  }
}

TEST_CASE("lexical errors carry a position") {
  CHECK_THROWS_AS(tokenize("a = #;"), LexError);
  try {
    tokenize("x = 1;\n  /* open");
    FAIL("expected LexError");
  } catch (const LexError& e) {
    CHECK(e.line == 2);
    CHECK(e.col == 3);
  }
  CHECK_THROWS_AS(tokenize("s = \"abc"), LexError);
}

TEST_CASE("literal spellings") {
  auto toks = tokenize("0xffffffffL 0d 1.5e3 'x' '\\n' \"a\\\"b\"");
  REQUIRE(toks.size() == 6);
  for (const auto& t : toks) CHECK(t.kind == TokenKind::Literal);
  CHECK(toks[0].text == "0xffffffffL");
  CHECK(toks[5].text == "\"a\\\"b\"");
}

TEST_CASE("parse a method with every statement form") {
  const char* src = R"(
    int f(int n, String s) {
      int x = 0;
      int[] arr = new int[n];
      for (int i = 0; i < n; ++i) { arr[i] = i; x += arr[i]; }
      while (x > 0) { x--; if (x == 3) { break; } else { continue; } }
      switch (n) { case 1: x = 1; break; default: x = 2; }
      this.total = s.length() + x;
      if (s == null) { throw new IllegalStateException("no"); }
      return x > 1 ? x : -x;
    })";
  Ast ast = parse_source(src);
  REQUIRE(ast.methods.size() == 1);
  const MethodDecl& m = ast.methods[0];
  CHECK(m.name == "f");
  CHECK(m.params.size() == 2);
  CHECK(m.body.size() == 8);
  CHECK(m.body[2].kind == StmtKind::For);
  CHECK(m.body[4].kind == StmtKind::Switch);
  CHECK(m.body[7].kind == StmtKind::Return);
}

TEST_CASE("break outside loop or switch is rejected") {
  CHECK_THROWS_AS(parse_source("void f() { break; }"), ParseError);
  CHECK_THROWS_AS(parse_source("void f(int a) { switch (a) { case 1: continue; } }"), ParseError);
  CHECK_NOTHROW(parse_source("void f(int a) { while (a > 0) { switch (a) { case 1: continue; } } }"));
}

TEST_CASE("locals must be declared before use") {
  CHECK_THROWS_AS(parse_source("void f() { x = y + 1; int y = 2; }"), ParseError);
  CHECK_NOTHROW(parse_source("void f(int y) { x = y + 1; }"));
}

TEST_CASE("parse errors name what was expected") {
  try {
    parse_source("void f() { if (a) x = 1 }");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.expected == "';'");
  }
}

TEST_CASE("operator precedence survives printing") {
  Ast ast = parse_source("void f(int a, int b) { x = (a + b) * a - b / (a - b); }");
  std::string printed = print_program(ast);
  CHECK(printed.find("(a + b) * a - b / (a - b)") != std::string::npos);
  CHECK(binary_precedence("*") > binary_precedence("+"));
  CHECK(binary_precedence("&&") > binary_precedence("||"));
}

TEST_CASE("print/parse round trip on generated programs") {
  for (std::uint32_t seed = 1; seed <= 200; ++seed) {
    std::string src = oracle::ProgramGen(seed).program();
    CAPTURE(src);
    Ast a = parse_source(src);
    std::string printed = print_program(a);
    Ast b = parse_source(printed);
    CHECK(equivalent(a, b));
    CHECK(print_program(b) == printed);
  }
}

TEST_CASE("golden transcriptions parse and round trip") {
  for (const auto& entry : std::filesystem::directory_iterator(oracle::golden_dir())) {
    if (entry.path().extension() != ".mj") continue;
    CAPTURE(entry.path().string());
    Ast a = parse_source(oracle::slurp(entry.path()));
    CHECK(equivalent(a, parse_source(print_program(a))));
  }
}
