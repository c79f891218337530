#pragma once

// Line-oriented statement splitting and a small tokenizer shared by the
// presentation, complex and witness file parsers.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "novikit/error.hpp"
#include "novikit/integer.hpp"

namespace novikit::text {

struct Position {
  int line = 1;
  int column = 1;
};

struct Statement {
  std::string key;
  std::string body;
  Position at;       // start of the key
  Position body_at;  // start of the body
};

// Statements end at ';' or a newline outside brackets; '#' starts a comment.
std::vector<Statement> split_statements(std::string_view source);

[[noreturn]] void syntax_error(Position at, const std::string& message);

enum class TokenKind { Integer, Ident, Caret, Plus, Minus, Star, LParen, RParen, LBracket, RBracket, Comma, Equals, End };

struct Token {
  TokenKind kind;
  std::string text;
  Position at;
};

class Lexer {
 public:
  Lexer(std::string_view source, Position origin);

  const Token& peek() const { return tokens_[pos_]; }
  Token next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool accept(TokenKind kind);
  Token expect(TokenKind kind, const char* what);
  bool at_end() const { return peek().kind == TokenKind::End; }
  std::size_t mark() const { return pos_; }
  void reset(std::size_t mark) { pos_ = mark; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// Parses an optionally signed integer token sequence ("-3", "+2", "7").
Integer parse_signed_integer(Lexer& lex);

std::string trim(std::string_view s);
std::vector<std::string> split_top_level(std::string_view s, char sep);

// Position of character offset `offset` inside a body starting at `origin`.
Position advance(Position origin, std::string_view body, std::size_t offset);

}  // namespace novikit::text
