#include "novikit/novikov.hpp"

#include <algorithm>

#include "text.hpp"

namespace novikit {

namespace {

// anything this far out counts as exact
std::int64_t clamp_precision(std::int64_t p) { return p >= kExactPrecision / 2 ? kExactPrecision : p; }

std::string precision_text(std::int64_t p) { return p >= kExactPrecision ? "inf" : std::to_string(p); }

}  // namespace

NovikovSeries::NovikovSeries(Character u, Coefficients c, std::int64_t precision)
    : u_(std::move(u)), coeffs_(c), prec_(clamp_precision(precision)) {}

NovikovSeries NovikovSeries::zero(const Character& u, Coefficients c, std::int64_t precision) {
  return NovikovSeries(u, c, precision);
}

NovikovSeries NovikovSeries::one(const Character& u, Coefficients c, std::int64_t precision) {
  return monomial(u, u.presentation()->identity(), 1, c, precision);
}

NovikovSeries NovikovSeries::monomial(const Character& u, const NormalForm& g, const Integer& coeff,
                                      Coefficients c, std::int64_t precision) {
  NovikovSeries s(u, c, precision);
  s.add_term(g, coeff);
  return s;
}

NovikovSeries NovikovSeries::embed(const RingElement& x, const Character& u, std::int64_t precision,
                                   bool allow_truncate) {
  if (x.presentation() != u.presentation()) {
    fail(ErrorCode::MismatchedCharacter, "character and ring element use different presentations");
  }
  NovikovSeries s(u, x.coefficients(), precision);
  for (const auto& [g, c] : x.terms()) {
    const std::int64_t h = u.height(g);
    if (h >= s.prec_ && !allow_truncate) {
      fail(ErrorCode::PrecisionTooLow, "precision " + std::to_string(precision) + " drops the term of height " +
                                           std::to_string(h) + " in " + x.format());
    }
    s.add_term(g, c);
  }
  return s;
}

NovikovSeries NovikovSeries::parse(const Character& u, std::string_view s, Coefficients c) {
  auto at = s.rfind('@');
  if (at == std::string_view::npos) fail(ErrorCode::Syntax, "series needs a trailing '@prec N'");
  std::string tail = text::trim(s.substr(at + 1));
  if (tail.rfind("prec", 0) != 0) fail(ErrorCode::Syntax, "expected '@prec N' after the series");
  std::string value = text::trim(std::string_view(tail).substr(4));
  std::int64_t prec = kExactPrecision;
  if (value != "inf") {
    try {
      std::size_t used = 0;
      prec = std::stoll(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      fail(ErrorCode::Syntax, "precision must be an integer or 'inf'");
    }
  }
  RingElement x = RingElement::parse(u.presentation(), s.substr(0, at), c);
  return embed(x, u, prec, false);
}

std::int64_t NovikovSeries::valuation() const { return terms_.empty() ? prec_ : terms_.begin()->first.first; }

void NovikovSeries::add_term(const NormalForm& g, const Integer& coeff) {
  const std::int64_t h = u_.height(g);
  if (h >= prec_) return;
  auto [it, inserted] = terms_.try_emplace(Key{h, g}, coeff);
  if (!inserted) it->second += coeff;
  coeffs_.normalize(it->second);
  if (it->second == 0) terms_.erase(it);
}

void NovikovSeries::check_compatible(const NovikovSeries& y) const {
  if (!(u_ == y.u_)) fail(ErrorCode::MismatchedCharacter, "series over different characters");
  if (!(coeffs_ == y.coeffs_)) fail(ErrorCode::MismatchedCharacter, "series with different coefficient rings");
}

NovikovSeries NovikovSeries::truncated(std::int64_t precision) const {
  if (precision >= prec_) return *this;
  NovikovSeries r(u_, coeffs_, precision);
  for (const auto& [key, c] : terms_) {
    if (key.first >= precision) break;
    r.terms_.emplace(key, c);
  }
  return r;
}

NovikovSeries& NovikovSeries::operator+=(const NovikovSeries& y) {
  check_compatible(y);
  if (y.prec_ < prec_) *this = truncated(y.prec_);
  for (const auto& [key, c] : y.terms_) {
    if (key.first >= prec_) break;
    add_term(key.second, c);
  }
  return *this;
}

NovikovSeries& NovikovSeries::operator-=(const NovikovSeries& y) {
  check_compatible(y);
  if (y.prec_ < prec_) *this = truncated(y.prec_);
  for (const auto& [key, c] : y.terms_) {
    if (key.first >= prec_) break;
    add_term(key.second, -c);
  }
  return *this;
}

NovikovSeries NovikovSeries::operator+(const NovikovSeries& y) const {
  NovikovSeries r = *this;
  r += y;
  return r;
}

NovikovSeries NovikovSeries::operator-(const NovikovSeries& y) const {
  NovikovSeries r = *this;
  r -= y;
  return r;
}

NovikovSeries NovikovSeries::operator-() const { return scaled(-1); }

NovikovSeries NovikovSeries::scaled(const Integer& n) const {
  NovikovSeries r(u_, coeffs_, prec_);
  for (const auto& [key, c] : terms_) r.add_term(key.second, c * n);
  return r;
}

NovikovSeries NovikovSeries::operator*(const NovikovSeries& y) const {
  check_compatible(y);
  const std::int64_t p = clamp_precision(std::min(prec_ + y.valuation(), y.prec_ + valuation()));
  NovikovSeries r(u_, coeffs_, p);
  if (terms_.empty() || y.terms_.empty()) return r;
  const auto& pres = u_.presentation();
  const std::int64_t ymin = y.valuation();
  for (const auto& [kx, cx] : terms_) {
    if (kx.first + ymin >= p) break;
    for (const auto& [ky, cy] : y.terms_) {
      if (kx.first + ky.first >= p) break;
      r.add_term(pres->multiply(kx.second, ky.second), cx * cy);
    }
  }
  return r;
}

std::optional<UnitCertificate> NovikovSeries::certify_unit() const {
  if (terms_.empty()) {
    fail(ErrorCode::ZeroBelowPrecision,
         "series has no terms below precision " + precision_text(prec_) + "; raise the precision");
  }
  auto it = terms_.begin();
  const std::int64_t v = it->first.first;
  auto next = std::next(it);
  if (next != terms_.end() && next->first.first == v) return std::nullopt;
  if (!coeffs_.is_unit(it->second)) return std::nullopt;
  return UnitCertificate{v, it->first.second, it->second};
}

NovikovSeries NovikovSeries::invert_unit() const {
  std::optional<UnitCertificate> cert;
  try {
    cert = certify_unit();
  } catch (const Error& e) {
    fail(ErrorCode::NotAUnit, std::string("not a certified unit: ") + e.what());
  }
  if (!cert) fail(ErrorCode::NotAUnit, "not a certified unit: " + format());
  const auto& pres = u_.presentation();
  const NovikovSeries lead_inv =
      monomial(u_, pres->invert(cert->monomial), coeffs_.inverse(cert->coefficient), coeffs_);
  // x = lead * (1 + mu)
  NovikovSeries neg_mu = one(u_, coeffs_) - lead_inv * *this;
  if (!neg_mu.is_zero() && neg_mu.prec_ >= kExactPrecision / 2) {
    fail(ErrorCode::PrecisionTooLow, "inverting an exact non-monomial needs a finite precision");
  }
  NovikovSeries sum = one(u_, coeffs_, neg_mu.prec_);
  NovikovSeries power = sum;
  while (true) {
    // powers are known further out than the sum needs; cut them back so the loop ends
    power = (power * neg_mu).truncated(sum.precision());
    if (power.is_zero()) break;
    sum += power;
  }
  return sum * lead_inv;
}

bool NovikovSeries::agrees_below(const NovikovSeries& y, std::int64_t height) const {
  auto a = terms_.begin();
  auto b = y.terms_.begin();
  while (true) {
    const bool a_done = a == terms_.end() || a->first.first >= height;
    const bool b_done = b == y.terms_.end() || b->first.first >= height;
    if (a_done || b_done) return a_done && b_done;
    if (a->first != b->first || a->second != b->second) return false;
    ++a;
    ++b;
  }
}

bool NovikovSeries::is_one() const {
  return agrees_below(one(u_, coeffs_), prec_);
}

RingElement NovikovSeries::to_ring_element() const {
  RingElement x(u_.presentation(), coeffs_);
  for (const auto& [key, c] : terms_) x.add_term(key.second, c);
  return x;
}

std::string NovikovSeries::format() const {
  std::string out;
  const auto& pres = u_.presentation();
  if (terms_.empty()) out = "0";
  for (const auto& [key, c] : terms_) {
    RingElement single = RingElement::monomial(pres, key.second, c, coeffs_);
    std::string t = single.format();
    if (out.empty()) {
      out = t;
    } else if (t[0] == '-') {
      out += " - " + t.substr(1);
    } else {
      out += " + " + t;
    }
  }
  return out + " @prec " + precision_text(prec_);
}

// ---------------------------------------------------------------------------

NovikovMatrix::NovikovMatrix(Character u, Coefficients c, std::size_t rows, std::size_t cols,
                             std::int64_t precision)
    : u_(std::move(u)), coeffs_(c), rows_(rows), cols_(cols), prec_(clamp_precision(precision)),
      entries_(rows * cols, NovikovSeries(u_, c, precision)) {}

NovikovMatrix NovikovMatrix::identity(const Character& u, Coefficients c, std::size_t n, std::int64_t precision) {
  NovikovMatrix m(u, c, n, n, precision);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = NovikovSeries::one(u, c, precision);
  return m;
}

NovikovMatrix NovikovMatrix::embed(const RingMatrix& x, const Character& u, std::int64_t precision,
                                   bool allow_truncate) {
  NovikovMatrix m(u, x.coefficients(), x.rows(), x.cols(), precision);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) m.at(i, j) = NovikovSeries::embed(x.at(i, j), u, precision, allow_truncate);
  return m;
}

void NovikovMatrix::uniformize() {
  std::int64_t p = prec_;
  for (const auto& e : entries_) p = std::min(p, e.precision());
  prec_ = p;
  for (auto& e : entries_) e = e.truncated(p);
}

NovikovMatrix NovikovMatrix::truncated(std::int64_t precision) const {
  NovikovMatrix r = *this;
  r.prec_ = std::min(prec_, precision);
  r.uniformize();
  return r;
}

NovikovMatrix NovikovMatrix::operator+(const NovikovMatrix& y) const {
  if (rows_ != y.rows_ || cols_ != y.cols_) fail(ErrorCode::ShapeMismatch, "matrix sum shape mismatch");
  NovikovMatrix r = *this;
  r.prec_ = std::min(prec_, y.prec_);
  for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] += y.entries_[i];
  r.uniformize();
  return r;
}

NovikovMatrix NovikovMatrix::operator-(const NovikovMatrix& y) const {
  if (rows_ != y.rows_ || cols_ != y.cols_) fail(ErrorCode::ShapeMismatch, "matrix difference shape mismatch");
  NovikovMatrix r = *this;
  r.prec_ = std::min(prec_, y.prec_);
  for (std::size_t i = 0; i < entries_.size(); ++i) r.entries_[i] -= y.entries_[i];
  r.uniformize();
  return r;
}

NovikovMatrix NovikovMatrix::product(const NovikovMatrix& x, const NovikovMatrix& y, Product mode) {
  return mode == Product::Matrix ? x * y : compose(x, y);
}

namespace {

// Precision of a sum of products x_k * y_k when the operands have uniform
// precisions px, py: min over k of min(px + v(y_k), py + v(x_k)).
NovikovMatrix multiply_impl(const NovikovMatrix& x, const NovikovMatrix& y, bool compose) {
  if (x.cols() != y.rows()) {
    fail(ErrorCode::ShapeMismatch, "cannot multiply " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                                       " by " + std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
  }
  std::int64_t vx = kExactPrecision, vy = kExactPrecision;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) vx = std::min(vx, x.at(i, j).valuation());
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) vy = std::min(vy, y.at(i, j).valuation());
  const std::int64_t p = std::min(clamp_precision(x.precision() + vy), clamp_precision(y.precision() + vx));
  NovikovMatrix r(x.character(), x.coefficients(), x.rows(), y.cols(), p);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t l = 0; l < y.cols(); ++l) {
      NovikovSeries s = NovikovSeries::zero(x.character(), x.coefficients(), p);
      for (std::size_t j = 0; j < x.cols(); ++j) {
        const NovikovSeries& a = x.at(i, j);
        const NovikovSeries& b = y.at(j, l);
        if (a.is_zero() || b.is_zero()) continue;
        s += compose ? b * a : a * b;
      }
      r.at(i, l) = std::move(s);
    }
  r.uniformize();
  return r;
}

}  // namespace

NovikovMatrix NovikovMatrix::operator*(const NovikovMatrix& y) const { return multiply_impl(*this, y, false); }

NovikovMatrix NovikovMatrix::compose(const NovikovMatrix& after, const NovikovMatrix& before) {
  return multiply_impl(after, before, true);
}

bool NovikovMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const NovikovSeries& e) { return e.is_zero(); });
}

std::optional<std::pair<std::size_t, std::size_t>> NovikovMatrix::first_non_positive() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const auto& e = at(i, j);
      if (!e.is_zero() && e.valuation() <= 0) return std::make_pair(i, j);
    }
  return std::nullopt;
}

bool NovikovMatrix::agrees_below(const NovikovMatrix& y, std::int64_t height) const {
  if (rows_ != y.rows_ || cols_ != y.cols_) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (!entries_[i].agrees_below(y.entries_[i], height)) return false;
  return true;
}

bool NovikovMatrix::is_identity() const {
  if (rows_ != cols_) return false;
  return agrees_below(identity(u_, coeffs_, rows_, prec_), prec_);
}

std::string NovikovMatrix::format() const {
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

NovikovMatrix invert_id_minus(const NovikovMatrix& a, NovikovMatrix::Product mode) {
  if (a.rows() != a.cols()) fail(ErrorCode::ShapeMismatch, "invert_id_minus needs a square matrix");
  if (auto bad = a.first_non_positive()) {
    fail(ErrorCode::NotUPositive, "entry (" + std::to_string(bad->first) + ", " + std::to_string(bad->second) +
                                      ") = " + a.at(bad->first, bad->second).format() + " is not u-positive");
  }
  if (a.precision() >= kExactPrecision / 2 && !a.is_zero()) {
    fail(ErrorCode::PrecisionTooLow, "geometric series of an exact matrix needs a finite precision");
  }
  NovikovMatrix b = NovikovMatrix::identity(a.character(), a.coefficients(), a.rows(), a.precision());
  NovikovMatrix power = b;
  // heights grow by at least one per factor, so this stops below the precision
  while (true) {
    power = NovikovMatrix::product(power, a, mode).truncated(b.precision());
    if (power.is_zero()) break;
    b = b + power;
  }
  return b;
}

}  // namespace novikit
