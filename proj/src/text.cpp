#include "text.hpp"

#include <cctype>

namespace novikit::text {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

[[noreturn]] void syntax_error(Position at, const std::string& message) {
  fail(ErrorCode::Syntax,
       "line " + std::to_string(at.line) + ", column " + std::to_string(at.column) + ": " + message);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_top_level(std::string_view s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(std::string(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  parts.push_back(std::string(s.substr(start)));
  return parts;
}

Position advance(Position origin, std::string_view body, std::size_t offset) {
  Position p = origin;
  for (std::size_t i = 0; i < offset && i < body.size(); ++i) {
    if (body[i] == '\n') {
      ++p.line;
      p.column = 1;
    } else {
      ++p.column;
    }
  }
  return p;
}

std::vector<Statement> split_statements(std::string_view source) {
  std::vector<Statement> out;
  std::string current;
  Position start{1, 1};
  Position here{1, 1};
  int depth = 0;
  bool in_comment = false;
  bool started = false;

  auto flush = [&]() {
    std::string raw = current;
    current.clear();
    started = false;
    // locate first non-space character
    std::size_t b = 0;
    while (b < raw.size() && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    if (b == raw.size()) return;
    Position at = advance(start, raw, b);
    std::size_t k = b;
    while (k < raw.size() && (is_ident_char(raw[k]) || raw[k] == '-')) ++k;
    if (k == b) syntax_error(at, "expected a statement keyword");
    Statement st;
    st.key = raw.substr(b, k - b);
    st.at = at;
    std::size_t body = k;
    while (body < raw.size() && (raw[body] == ' ' || raw[body] == '\t')) ++body;
    if (body < raw.size() && raw[body] == ':') ++body;
    while (body < raw.size() && std::isspace(static_cast<unsigned char>(raw[body]))) ++body;
    st.body_at = advance(start, raw, body);
    std::size_t end = raw.size();
    while (end > body && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
    st.body = raw.substr(body, end - body);
    out.push_back(std::move(st));
  };

  for (std::size_t i = 0; i < source.size(); ++i) {
    char c = source[i];
    if (in_comment) {
      if (c == '\n') {
        in_comment = false;
      } else {
        ++here.column;
        continue;
      }
    }
    if (c == '#') {
      in_comment = true;
      ++here.column;
      continue;
    }
    if (!started) {
      start = here;
      started = true;
    }
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if ((c == '\n' || c == ';') && depth <= 0) {
      if (depth < 0) syntax_error(here, "unbalanced closing bracket");
      flush();
      depth = 0;
    } else {
      current.push_back(c);
    }
    if (c == '\n') {
      ++here.line;
      here.column = 1;
    } else {
      ++here.column;
    }
  }
  if (depth != 0) syntax_error(here, "unbalanced brackets at end of input");
  flush();
  return out;
}

Lexer::Lexer(std::string_view src, Position origin) {
  Position p = origin;
  std::size_t i = 0;
  auto bump = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i + k] == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
    i += n;
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(1);
      continue;
    }
    Position at = p;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tokens_.push_back({TokenKind::Integer, std::string(src.substr(i, j - i)), at});
      bump(j - i);
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      tokens_.push_back({TokenKind::Ident, std::string(src.substr(i, j - i)), at});
      bump(j - i);
      continue;
    }
    TokenKind kind;
    switch (c) {
      case '^': kind = TokenKind::Caret; break;
      case '+': kind = TokenKind::Plus; break;
      case '-': kind = TokenKind::Minus; break;
      case '*': kind = TokenKind::Star; break;
      case '(': kind = TokenKind::LParen; break;
      case ')': kind = TokenKind::RParen; break;
      case '[': kind = TokenKind::LBracket; break;
      case ']': kind = TokenKind::RBracket; break;
      case ',': kind = TokenKind::Comma; break;
      case '=': kind = TokenKind::Equals; break;
      default:
        syntax_error(at, std::string("unexpected character '") + c + "'");
    }
    tokens_.push_back({kind, std::string(1, c), at});
    bump(1);
  }
  tokens_.push_back({TokenKind::End, "", p});
}

bool Lexer::accept(TokenKind kind) {
  if (peek().kind == kind) {
    next();
    return true;
  }
  return false;
}

Token Lexer::expect(TokenKind kind, const char* what) {
  if (peek().kind != kind) {
    const Token& t = peek();
    syntax_error(t.at, std::string("expected ") + what +
                           (t.kind == TokenKind::End ? " at end of input" : ", found '" + t.text + "'"));
  }
  return next();
}

Integer parse_signed_integer(Lexer& lex) {
  bool negative = false;
  if (lex.accept(TokenKind::Minus)) {
    negative = true;
  } else {
    lex.accept(TokenKind::Plus);
  }
  Token t = lex.expect(TokenKind::Integer, "an integer");
  Integer v(t.text, 10);
  return negative ? Integer(-v) : v;
}

}  // namespace novikit::text
