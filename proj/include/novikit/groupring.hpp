#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "novikit/pcgroup.hpp"

namespace novikit {

/// Coefficient ring: the integers or a prime field F_p.
class Coefficients {
 public:
  enum class Kind { Integer, PrimeField };

  static Coefficients integers() { return Coefficients(Kind::Integer, 0); }
  static Coefficients prime_field(std::uint64_t p);

  Kind kind() const { return kind_; }
  std::uint64_t prime() const { return p_; }
  bool is_field() const { return kind_ == Kind::PrimeField; }

  void normalize(Integer& c) const;
  bool is_unit(const Integer& c) const;
  Integer inverse(const Integer& c) const;  // c must be a unit
  std::string describe() const;

  friend bool operator==(const Coefficients& a, const Coefficients& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_;
  }

 private:
  Coefficients(Kind k, std::uint64_t p) : kind_(k), p_(p) {}
  Kind kind_;
  std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

/// Finitely supported sum of group elements with coefficients; terms are kept
/// in lexicographic exponent order and never hold a zero coefficient.
class RingElement {
 public:
  using Terms = std::map<NormalForm, Integer>;

  RingElement() = default;
  explicit RingElement(PresentationPtr pres, Coefficients c = Coefficients::integers());

  static RingElement zero(PresentationPtr pres, Coefficients c = Coefficients::integers());
  static RingElement one(PresentationPtr pres, Coefficients c = Coefficients::integers());
  static RingElement constant(PresentationPtr pres, const Integer& n,
                              Coefficients c = Coefficients::integers());
  static RingElement monomial(PresentationPtr pres, const NormalForm& g, const Integer& coeff = 1,
                              Coefficients c = Coefficients::integers());
  /// Parses `1 - a*b^-1 + 3*b^2`; juxtaposition multiplies, negative powers
  /// are allowed on single monomials only.
  static RingElement parse(PresentationPtr pres, std::string_view text,
                           Coefficients c = Coefficients::integers(), int line = 1, int column = 1);

  const PresentationPtr& presentation() const { return pres_; }
  const Coefficients& coefficients() const { return coeffs_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Integer coefficient(const NormalForm& g) const;

  void add_term(const NormalForm& g, const Integer& coeff);

  RingElement operator+(const RingElement& y) const;
  RingElement operator-(const RingElement& y) const;
  RingElement operator-() const;
  RingElement operator*(const RingElement& y) const;
  RingElement& operator+=(const RingElement& y);
  RingElement& operator-=(const RingElement& y);
  RingElement scaled(const Integer& n) const;

  RingElement involution() const;
  Integer augmentation() const;
  /// Same element with coefficients reduced into `target`.
  RingElement with_coefficients(Coefficients target) const;

  /// (min, max) of u over the support; ZeroElement for 0.
  std::pair<Integer, Integer> height_range(const Character& u) const;
  bool is_u_positive(const Character& u) const;

  std::string format() const;

  friend bool operator==(const RingElement& a, const RingElement& b) {
    return a.coeffs_ == b.coeffs_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const RingElement& y) const;

  PresentationPtr pres_;
  Coefficients coeffs_ = Coefficients::integers();
  Terms terms_;
};

/// Dense matrix of group-ring elements. For boundary maps, column j holds the
/// coordinates of the image of the j-th basis element.
class RingMatrix {
 public:
  RingMatrix() = default;
  RingMatrix(PresentationPtr pres, std::size_t rows, std::size_t cols,
             Coefficients c = Coefficients::integers());
  static RingMatrix identity(PresentationPtr pres, std::size_t n, Coefficients c = Coefficients::integers());

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const PresentationPtr& presentation() const { return pres_; }
  const Coefficients& coefficients() const { return coeffs_; }
  RingElement& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const RingElement& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  bool is_zero() const;
  RingMatrix operator+(const RingMatrix& y) const;
  RingMatrix operator-(const RingMatrix& y) const;
  RingMatrix transposed() const;
  RingMatrix with_coefficients(Coefficients target) const;
  /// Left-module composition `after o before`: entry (i,l) is
  /// sum_j before(j,l) * after(i,j).
  static RingMatrix compose(const RingMatrix& after, const RingMatrix& before);

  std::string format() const;

  friend bool operator==(const RingMatrix& a, const RingMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  PresentationPtr pres_;
  Coefficients coeffs_ = Coefficients::integers();
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RingElement> entries_;
};

/// Parses `[[e, e], [e, e]]` into a matrix of ring elements.
RingMatrix parse_ring_matrix(PresentationPtr pres, std::string_view text, Coefficients c, int line = 1,
                             int column = 1);

}  // namespace novikit
