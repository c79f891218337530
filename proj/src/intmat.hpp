#pragma once

#include <optional>
#include <vector>

#include "novikit/integer.hpp"

namespace novikit::detail {

using IntMatrix = std::vector<std::vector<Integer>>;

IntMatrix identity_matrix(std::size_t n);
IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);
// Inverse over Z; nullopt when the matrix is singular or not unimodular.
std::optional<IntMatrix> unimodular_inverse(const IntMatrix& m);
// n >= 0
IntMatrix mat_pow(IntMatrix base, Integer n);

}  // namespace novikit::detail
