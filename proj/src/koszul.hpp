#pragma once

// Koszul complex bookkeeping and its Z-linear contraction, shared by the
// mapping torus builder and the standard homotopy for sigma witnesses.

#include <string>
#include <vector>

#include "novikit/groupring.hpp"

namespace novikit::detail {

using Chain = std::vector<RingElement>;  // one coefficient per basis element

class KoszulBasis {
 public:
  explicit KoszulBasis(std::size_t k);

  std::size_t generators() const { return k_; }
  const std::vector<std::vector<std::size_t>>& subsets(std::size_t degree) const { return subsets_[degree]; }
  std::size_t index_of(const std::vector<std::size_t>& subset) const;
  std::string label(const std::vector<std::size_t>& subset, const std::vector<std::string>& names) const;

 private:
  std::size_t k_;
  std::vector<std::vector<std::vector<std::size_t>>> subsets_;
};

// result_i = sum_j c_j * d(i, j)
Chain apply_matrix(const RingMatrix& d, const Chain& c);

// Contraction h with dh + hd = id - (augment and include). Only monomials in
// the Koszul generators are allowed.
Chain koszul_contract(const PresentationPtr& pres, const std::vector<std::size_t>& positions,
                      const KoszulBasis& basis, std::size_t degree, const Chain& c);

}  // namespace novikit::detail
