#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "novikit/groupring.hpp"
#include "novikit/pcgroup.hpp"

namespace novikit {

/// Precision used for values known exactly (monomials, constants).
inline constexpr std::int64_t kExactPrecision = INT64_MAX / 4;
inline constexpr std::int64_t kDefaultPrecision = 32;

/// x = c * g * (1 + mu) with mu supported strictly above the leading height.
struct UnitCertificate {
  std::int64_t height = 0;
  NormalForm monomial;
  Integer coefficient;
};

/// Truncated element of the Novikov completion: the terms of u-height below
/// `precision` are known exactly, everything at or above it is unknown.
class NovikovSeries {
 public:
  using Key = std::pair<std::int64_t, NormalForm>;
  using Terms = std::map<Key, Integer>;

  NovikovSeries() = default;
  NovikovSeries(Character u, Coefficients c, std::int64_t precision);

  static NovikovSeries zero(const Character& u, Coefficients c, std::int64_t precision);
  static NovikovSeries one(const Character& u, Coefficients c, std::int64_t precision = kExactPrecision);
  static NovikovSeries monomial(const Character& u, const NormalForm& g, const Integer& coeff, Coefficients c,
                                std::int64_t precision = kExactPrecision);
  /// Without `allow_truncate`, N must exceed every height of x.
  static NovikovSeries embed(const RingElement& x, const Character& u, std::int64_t precision,
                             bool allow_truncate = false);
  /// Parses "expr @prec N".
  static NovikovSeries parse(const Character& u, std::string_view text, Coefficients c = Coefficients::integers());

  const Character& character() const { return u_; }
  const Coefficients& coefficients() const { return coeffs_; }
  std::int64_t precision() const { return prec_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Leading height; the precision for the zero series.
  std::int64_t valuation() const;

  void add_term(const NormalForm& g, const Integer& coeff);

  NovikovSeries operator+(const NovikovSeries& y) const;
  NovikovSeries operator-(const NovikovSeries& y) const;
  NovikovSeries operator-() const;
  NovikovSeries operator*(const NovikovSeries& y) const;
  NovikovSeries& operator+=(const NovikovSeries& y);
  NovikovSeries& operator-=(const NovikovSeries& y);
  NovikovSeries scaled(const Integer& n) const;
  NovikovSeries truncated(std::int64_t precision) const;

  /// Reads only terms below the precision, so a certificate is exact.
  std::optional<UnitCertificate> certify_unit() const;
  NovikovSeries invert_unit() const;

  /// Same terms at every height below `height`.
  bool agrees_below(const NovikovSeries& y, std::int64_t height) const;
  bool is_one() const;  // equal to 1 below its precision
  RingElement to_ring_element() const;
  std::string format() const;

 private:
  void check_compatible(const NovikovSeries& y) const;

  Character u_;
  Coefficients coeffs_ = Coefficients::integers();
  std::int64_t prec_ = kExactPrecision;
  Terms terms_;
};

/// Matrix over the Novikov completion with one common precision.
class NovikovMatrix {
 public:
  enum class Product { Matrix, Composition };

  NovikovMatrix() = default;
  NovikovMatrix(Character u, Coefficients c, std::size_t rows, std::size_t cols, std::int64_t precision);

  static NovikovMatrix identity(const Character& u, Coefficients c, std::size_t n, std::int64_t precision);
  static NovikovMatrix embed(const RingMatrix& m, const Character& u, std::int64_t precision,
                             bool allow_truncate = false);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t precision() const { return prec_; }
  const Character& character() const { return u_; }
  const Coefficients& coefficients() const { return coeffs_; }
  NovikovSeries& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const NovikovSeries& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  /// Truncates every entry to the smallest entry precision.
  void uniformize();
  NovikovMatrix truncated(std::int64_t precision) const;

  NovikovMatrix operator+(const NovikovMatrix& y) const;
  NovikovMatrix operator-(const NovikovMatrix& y) const;
  /// Ordinary row-by-column product.
  NovikovMatrix operator*(const NovikovMatrix& y) const;
  /// Left-module composition `after o before` (see RingMatrix::compose).
  static NovikovMatrix compose(const NovikovMatrix& after, const NovikovMatrix& before);
  static NovikovMatrix product(const NovikovMatrix& x, const NovikovMatrix& y, Product mode);

  bool is_zero() const;
  /// First entry (row, col) that is not u-positive, if any.
  std::optional<std::pair<std::size_t, std::size_t>> first_non_positive() const;
  bool agrees_below(const NovikovMatrix& y, std::int64_t height) const;
  bool is_identity() const;  // below its precision
  std::string format() const;

 private:
  Character u_;
  Coefficients coeffs_ = Coefficients::integers();
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::int64_t prec_ = kExactPrecision;
  std::vector<NovikovSeries> entries_;
};

/// B = Id + A + A^2 + ... for u-positive A; (Id - A) B = B (Id - A) = Id up to
/// precision in the chosen product.
NovikovMatrix invert_id_minus(const NovikovMatrix& a, NovikovMatrix::Product mode = NovikovMatrix::Product::Matrix);

}  // namespace novikit
