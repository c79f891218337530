#include "novikit/groupring.hpp"

#include "ringparse.hpp"
#include "text.hpp"

namespace novikit {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Coefficients Coefficients::prime_field(std::uint64_t p) {
  if (!is_prime(p)) fail(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
  return Coefficients(Kind::PrimeField, p);
}

void Coefficients::normalize(Integer& c) const {
  if (kind_ == Kind::PrimeField) {
    Integer m(static_cast<unsigned long>(p_));
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  }
}

bool Coefficients::is_unit(const Integer& c) const {
  if (kind_ == Kind::Integer) return c == 1 || c == -1;
  Integer r = c;
  normalize(r);
  return r != 0;
}

Integer Coefficients::inverse(const Integer& c) const {
  if (!is_unit(c)) fail(ErrorCode::NotAUnit, "coefficient " + c.get_str() + " is not a unit");
  if (kind_ == Kind::Integer) return c;
  Integer r;
  Integer m(static_cast<unsigned long>(p_));
  mpz_invert(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  return r;
}

std::string Coefficients::describe() const {
  return kind_ == Kind::Integer ? "Z" : "F_" + std::to_string(p_);
}

// ---------------------------------------------------------------------------

RingElement::RingElement(PresentationPtr pres, Coefficients c) : pres_(std::move(pres)), coeffs_(c) {}

RingElement RingElement::zero(PresentationPtr pres, Coefficients c) { return RingElement(std::move(pres), c); }

RingElement RingElement::one(PresentationPtr pres, Coefficients c) {
  return constant(std::move(pres), 1, c);
}

RingElement RingElement::constant(PresentationPtr pres, const Integer& n, Coefficients c) {
  RingElement r(pres, c);
  r.add_term(pres->identity(), n);
  return r;
}

RingElement RingElement::monomial(PresentationPtr pres, const NormalForm& g, const Integer& coeff,
                                  Coefficients c) {
  RingElement r(std::move(pres), c);
  r.add_term(g, coeff);
  return r;
}

Integer RingElement::coefficient(const NormalForm& g) const {
  auto it = terms_.find(g);
  return it == terms_.end() ? Integer(0) : it->second;
}

void RingElement::add_term(const NormalForm& g, const Integer& coeff) {
  auto [it, inserted] = terms_.try_emplace(g, coeff);
  if (!inserted) it->second += coeff;
  coeffs_.normalize(it->second);
  if (it->second == 0) terms_.erase(it);
}

void RingElement::check_compatible(const RingElement& y) const {
  if (pres_ != y.pres_) fail(ErrorCode::MismatchedPresentation, "ring elements over different presentations");
  if (!(coeffs_ == y.coeffs_)) {
    fail(ErrorCode::MismatchedPresentation, "ring elements with different coefficient rings");
  }
}

RingElement& RingElement::operator+=(const RingElement& y) {
  check_compatible(y);
  for (const auto& [g, c] : y.terms_) add_term(g, c);
  return *this;
}

RingElement& RingElement::operator-=(const RingElement& y) {
  check_compatible(y);
  for (const auto& [g, c] : y.terms_) add_term(g, -c);
  return *this;
}

RingElement RingElement::operator+(const RingElement& y) const {
  RingElement r = *this;
  r += y;
  return r;
}

RingElement RingElement::operator-(const RingElement& y) const {
  RingElement r = *this;
  r -= y;
  return r;
}

RingElement RingElement::operator-() const { return scaled(-1); }

RingElement RingElement::scaled(const Integer& n) const {
  RingElement r(pres_, coeffs_);
  for (const auto& [g, c] : terms_) r.add_term(g, c * n);
  return r;
}

RingElement RingElement::operator*(const RingElement& y) const {
  check_compatible(y);
  RingElement r(pres_, coeffs_);
  for (const auto& [g, c] : terms_)
    for (const auto& [h, d] : y.terms_) r.add_term(pres_->multiply(g, h), c * d);
  return r;
}

RingElement RingElement::involution() const {
  RingElement r(pres_, coeffs_);
  for (const auto& [g, c] : terms_) r.add_term(pres_->invert(g), c);
  return r;
}

Integer RingElement::augmentation() const {
  Integer s = 0;
  for (const auto& [g, c] : terms_) s += c;
  coeffs_.normalize(s);
  return s;
}

RingElement RingElement::with_coefficients(Coefficients target) const {
  RingElement r(pres_, target);
  for (const auto& [g, c] : terms_) r.add_term(g, c);
  return r;
}

std::pair<Integer, Integer> RingElement::height_range(const Character& u) const {
  if (terms_.empty()) fail(ErrorCode::ZeroElement, "height range of the zero element");
  if (u.presentation() != pres_) fail(ErrorCode::MismatchedCharacter, "character over another presentation");
  bool first = true;
  Integer lo, hi;
  for (const auto& [g, c] : terms_) {
    Integer h = u.evaluate(g);
    if (first || h < lo) lo = h;
    if (first || h > hi) hi = h;
    first = false;
  }
  return {lo, hi};
}

bool RingElement::is_u_positive(const Character& u) const {
  if (terms_.empty()) return true;
  return height_range(u).first > 0;
}

std::string RingElement::format() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [g, c] : terms_) {
    Integer mag = abs(c);
    bool negative = c < 0;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    std::string word;
    for (std::size_t p = 0; p < g.size(); ++p) {
      if (g.exponents[p] == 0) continue;
      if (!word.empty()) word += "*";
      word += pres_->name(p);
      if (g.exponents[p] != 1) word += "^" + g.exponents[p].get_str();
    }
    if (word.empty()) {
      out += mag.get_str();
    } else if (mag == 1) {
      out += word;
    } else {
      out += mag.get_str() + "*" + word;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expression parser

namespace {

bool starts_primary(const text::Token& t) {
  return t.kind == text::TokenKind::Integer || t.kind == text::TokenKind::Ident ||
         t.kind == text::TokenKind::LParen;
}

struct ExprParser {
  text::Lexer& lex;
  const PresentationPtr& pres;
  Coefficients coeffs;

  RingElement primary() {
    const text::Token t = lex.peek();
    if (t.kind == text::TokenKind::Integer) {
      lex.next();
      return RingElement::constant(pres, Integer(t.text, 10), coeffs);
    }
    if (t.kind == text::TokenKind::Ident) {
      lex.next();
      auto pos = pres->position_of(t.text);
      if (!pos) {
        fail(ErrorCode::UndeclaredGenerator, "line " + std::to_string(t.at.line) + ", column " +
                                                 std::to_string(t.at.column) + ": undeclared generator '" +
                                                 t.text + "'");
      }
      return RingElement::monomial(pres, pres->generator_power(*pos), 1, coeffs);
    }
    if (t.kind == text::TokenKind::LParen) {
      lex.next();
      RingElement e = expr();
      lex.expect(text::TokenKind::RParen, "')'");
      return e;
    }
    text::syntax_error(t.at, t.kind == text::TokenKind::End ? "expression ends early"
                                                             : "unexpected '" + t.text + "' in expression");
  }

  RingElement factor() {
    RingElement base = primary();
    const text::Position at = lex.peek().at;
    if (!lex.accept(text::TokenKind::Caret)) return base;
    Integer n = text::parse_signed_integer(lex);
    if (n < 0) {
      if (base.size() != 1 || !coeffs.is_unit(base.terms().begin()->second)) {
        text::syntax_error(at, "negative powers are only allowed on monomials");
      }
      const auto& [g, c] = *base.terms().begin();
      base = RingElement::monomial(pres, pres->invert(g), coeffs.inverse(c), coeffs);
      n = -n;
    }
    if (base.size() == 1) {
      const auto& [g, c] = *base.terms().begin();
      Integer cp;
      mpz_pow_ui(cp.get_mpz_t(), c.get_mpz_t(), n.get_ui());
      return RingElement::monomial(pres, pres->power(g, n), cp, coeffs);
    }
    if (n > 64) text::syntax_error(at, "exponent too large for a polynomial power");
    RingElement r = RingElement::one(pres, coeffs);
    for (Integer i = 0; i < n; ++i) r = r * base;
    return r;
  }

  RingElement term() {
    RingElement r = factor();
    while (true) {
      if (lex.accept(text::TokenKind::Star)) {
        r = r * factor();
      } else if (starts_primary(lex.peek())) {
        r = r * factor();
      } else {
        return r;
      }
    }
  }

  RingElement expr() {
    RingElement r = RingElement::zero(pres, coeffs);
    bool first = true;
    while (true) {
      bool negative = false;
      if (lex.accept(text::TokenKind::Minus)) {
        negative = true;
      } else if (!lex.accept(text::TokenKind::Plus) && !first) {
        return r;
      }
      RingElement t = term();
      if (negative) {
        r -= t;
      } else {
        r += t;
      }
      first = false;
    }
  }
};

}  // namespace

namespace detail {

RingElement parse_ring_expr(text::Lexer& lex, const PresentationPtr& pres, Coefficients c) {
  ExprParser p{lex, pres, c};
  return p.expr();
}

std::vector<RingElement> parse_ring_row(text::Lexer& lex, const PresentationPtr& pres, Coefficients c) {
  std::vector<RingElement> row;
  lex.expect(text::TokenKind::LBracket, "'['");
  if (lex.accept(text::TokenKind::RBracket)) return row;
  do {
    row.push_back(parse_ring_expr(lex, pres, c));
  } while (lex.accept(text::TokenKind::Comma));
  lex.expect(text::TokenKind::RBracket, "']'");
  return row;
}

std::vector<std::vector<RingElement>> parse_ring_rows(text::Lexer& lex, const PresentationPtr& pres,
                                                      Coefficients c) {
  std::vector<std::vector<RingElement>> rows;
  lex.expect(text::TokenKind::LBracket, "'['");
  if (lex.accept(text::TokenKind::RBracket)) return rows;
  do {
    rows.push_back(parse_ring_row(lex, pres, c));
  } while (lex.accept(text::TokenKind::Comma));
  lex.expect(text::TokenKind::RBracket, "']'");
  return rows;
}

}  // namespace detail

RingElement RingElement::parse(PresentationPtr pres, std::string_view s, Coefficients c, int line, int column) {
  text::Lexer lex(s, {line, column});
  RingElement r = detail::parse_ring_expr(lex, pres, c);
  if (!lex.at_end()) text::syntax_error(lex.peek().at, "unexpected '" + lex.peek().text + "' after expression");
  return r;
}

// ---------------------------------------------------------------------------
// RingMatrix

RingMatrix::RingMatrix(PresentationPtr pres, std::size_t rows, std::size_t cols, Coefficients c)
    : pres_(pres), coeffs_(c), rows_(rows), cols_(cols), entries_(rows * cols, RingElement(pres, c)) {}

RingMatrix RingMatrix::identity(PresentationPtr pres, std::size_t n, Coefficients c) {
  RingMatrix m(pres, n, n, c);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = RingElement::one(pres, c);
  return m;
}

bool RingMatrix::is_zero() const {
  for (const auto& e : entries_)
    if (!e.is_zero()) return false;
  return true;
}

RingMatrix RingMatrix::operator+(const RingMatrix& y) const {
  if (rows_ != y.rows_ || cols_ != y.cols_) fail(ErrorCode::ShapeMismatch, "matrix sum shape mismatch");
  RingMatrix r = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] += y.entries_[i];
  return r;
}

RingMatrix RingMatrix::operator-(const RingMatrix& y) const {
  if (rows_ != y.rows_ || cols_ != y.cols_) fail(ErrorCode::ShapeMismatch, "matrix difference shape mismatch");
  RingMatrix r = *this;
  for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] -= y.entries_[i];
  return r;
}

RingMatrix RingMatrix::transposed() const {
  RingMatrix r(pres_, cols_, rows_, coeffs_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

RingMatrix RingMatrix::with_coefficients(Coefficients target) const {
  RingMatrix r(pres_, rows_, cols_, target);
  for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] = entries_[i].with_coefficients(target);
  return r;
}

RingMatrix RingMatrix::compose(const RingMatrix& after, const RingMatrix& before) {
  if (after.cols_ != before.rows_) {
    fail(ErrorCode::ShapeMismatch, "cannot compose " + std::to_string(after.rows_) + "x" +
                                       std::to_string(after.cols_) + " after " + std::to_string(before.rows_) +
                                       "x" + std::to_string(before.cols_));
  }
  RingMatrix r(after.pres_ ? after.pres_ : before.pres_, after.rows_, before.cols_, after.coeffs_);
  for (std::size_t i = 0; i < after.rows_; ++i)
    for (std::size_t l = 0; l < before.cols_; ++l) {
      RingElement s(r.pres_, r.coeffs_);
      for (std::size_t j = 0; j < after.cols_; ++j) {
        const RingElement& f = before.at(j, l);
        const RingElement& g = after.at(i, j);
        if (f.is_zero() || g.is_zero()) continue;
        s += f * g;
      }
      r.at(i, l) = std::move(s);
    }
  return r;
}

std::string RingMatrix::format() const {
  std::string out = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) out += ", ";
    out += "[";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) out += ", ";
      out += at(i, j).format();
    }
    out += "]";
  }
  return out + "]";
}

RingMatrix parse_ring_matrix(PresentationPtr pres, std::string_view s, Coefficients c, int line, int column) {
  text::Lexer lex(s, {line, column});
  const text::Position at = lex.peek().at;
  auto rows = detail::parse_ring_rows(lex, pres, c);
  if (!lex.at_end()) text::syntax_error(lex.peek().at, "unexpected '" + lex.peek().text + "' after matrix");
  const std::size_t ncols = rows.empty() ? 0 : rows[0].size();
  for (const auto& row : rows) {
    if (row.size() != ncols) text::syntax_error(at, "matrix rows have different lengths");
  }
  RingMatrix m(pres, rows.size(), ncols, c);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < ncols; ++j) m.at(i, j) = std::move(rows[i][j]);
  return m;
}

}  // namespace novikit
