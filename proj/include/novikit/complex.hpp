#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "novikit/groupring.hpp"
#include "novikit/novikov.hpp"
#include "novikit/pcgroup.hpp"

namespace novikit {

/// Location of the first nonzero entry of a composite d_k o d_{k+1}.
struct DSquaredReport {
  bool ok = true;
  std::size_t degree = 0;  // k, the target degree of d_k o d_{k+1} is k-1
  std::size_t row = 0;
  std::size_t col = 0;
  std::string value;
};

/// Based free chain complex C_n -> ... -> C_0 of left modules over the group
/// ring. boundary(k) has shape rank(k-1) x rank(k); column j lists the
/// coordinates of d(e_j).
class FreeComplex {
 public:
  FreeComplex() = default;
  FreeComplex(PresentationPtr pres, std::vector<std::size_t> ranks, Coefficients c = Coefficients::integers());

  /// Parses the complex file format; `base_dir` resolves `pres:` paths.
  /// Verifies d o d = 0 before returning.
  static FreeComplex parse(std::string_view text, const std::string& base_dir = ".");

  const PresentationPtr& presentation() const { return pres_; }
  const Coefficients& coefficients() const { return coeffs_; }
  std::size_t top_degree() const { return ranks_.empty() ? 0 : ranks_.size() - 1; }
  std::size_t num_degrees() const { return ranks_.size(); }
  const std::vector<std::size_t>& ranks() const { return ranks_; }
  std::size_t rank(std::size_t k) const { return k < ranks_.size() ? ranks_[k] : 0; }

  const RingMatrix& boundary(std::size_t k) const;
  void set_boundary(std::size_t k, RingMatrix d);

  const std::vector<std::string>& labels(std::size_t k) const { return labels_[k]; }
  void set_labels(std::size_t k, std::vector<std::string> labels);

  const std::optional<int>& manifold_dim() const { return manifold_dim_; }
  void set_manifold_dim(std::optional<int> n) { manifold_dim_ = n; }
  /// Integer augmentation row on C_0, present for resolutions.
  const std::optional<std::vector<Integer>>& augmentation() const { return aug_; }
  void set_augmentation(std::optional<std::vector<Integer>> aug) { aug_ = std::move(aug); }

  DSquaredReport check_d_squared() const;
  /// Throws DSquaredNonzero naming the offending degree and entry.
  void require_d_squared() const;

  std::int64_t euler_characteristic() const;
  FreeComplex with_coefficients(Coefficients target) const;
  std::string serialize() const;

 private:
  PresentationPtr pres_;
  Coefficients coeffs_ = Coefficients::integers();
  std::vector<std::size_t> ranks_;
  std::vector<RingMatrix> d_;  // d_[k] for k >= 1; d_[0] unused
  std::vector<std::vector<std::string>> labels_;
  std::optional<int> manifold_dim_;
  std::optional<std::vector<Integer>> aug_;
};

/// Left Fox derivative of a word with respect to the generator at a pc position.
RingElement fox_derivative(const PresentationPtr& pres, const Word& r, std::size_t generator);

/// 2-complex of a presentation: one 0-cell, one 1-cell per generator (in
/// declaration order), one 2-cell per relator.
FreeComplex presentation_complex(const PresentationPtr& pres, const std::vector<Word>& relators);

/// Koszul complex of the free abelian subgroup spanned by the given pc
/// positions; with all generators it is the cellular complex of the torus.
FreeComplex koszul_complex(const PresentationPtr& pres, const std::vector<std::size_t>& positions);
FreeComplex koszul_complex(const PresentationPtr& pres);

/// C x S^p with cells e x pt then e x S^p in each degree.
FreeComplex product_with_sphere(const FreeComplex& c, int p);

/// Mapping torus of the torus automorphism phi (column j = image of a_j):
/// builds the pc group Z^k x|_phi Z and its cellular chain complex.
FreeComplex mapping_torus(const std::vector<std::vector<Integer>>& phi);

/// Based complex over the Novikov completion at a common precision.
struct NovikovComplex {
  Character u;
  std::vector<std::size_t> ranks;
  std::vector<NovikovMatrix> d;  // d[k] for k >= 1
  std::vector<std::vector<std::string>> labels;

  std::size_t top_degree() const { return ranks.empty() ? 0 : ranks.size() - 1; }
  std::int64_t precision() const;
  /// d_k o d_{k+1} vanishes below the precision in every degree.
  bool d_squared_vanishes() const;
  std::int64_t euler_characteristic() const;
};

NovikovComplex base_change_novikov(const FreeComplex& c, const Character& u, std::int64_t precision);

/// Betti numbers over F_p(t) after pushing g to t^{u(g)}.
std::vector<std::size_t> fingerprint(const FreeComplex& c, const Character& u, std::uint64_t p);

}  // namespace novikit
