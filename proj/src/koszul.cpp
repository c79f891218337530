#include "koszul.hpp"

#include <algorithm>

namespace novikit::detail {

KoszulBasis::KoszulBasis(std::size_t k) : k_(k), subsets_(k + 1) {
  // subsets of each size in lexicographic order
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(i);
    subsets_[s.size()].push_back(s);
  }
  for (auto& level : subsets_) std::sort(level.begin(), level.end());
}

std::size_t KoszulBasis::index_of(const std::vector<std::size_t>& subset) const {
  const auto& level = subsets_[subset.size()];
  auto it = std::lower_bound(level.begin(), level.end(), subset);
  return static_cast<std::size_t>(it - level.begin());
}

std::string KoszulBasis::label(const std::vector<std::size_t>& subset, const std::vector<std::string>& names) const {
  if (subset.empty()) return "*";
  bool short_names = std::all_of(names.begin(), names.end(), [](const std::string& n) { return n.size() == 1; });
  std::string out;
  for (std::size_t i : subset) {
    if (!out.empty() && !short_names) out += ".";
    out += names[i];
  }
  return out;
}

Chain apply_matrix(const RingMatrix& d, const Chain& c) {
  Chain out(d.rows(), RingElement::zero(d.presentation(), d.coefficients()));
  for (std::size_t j = 0; j < d.cols(); ++j) {
    if (c[j].is_zero()) continue;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      if (d.at(i, j).is_zero()) continue;
      out[i] += c[j] * d.at(i, j);
    }
  }
  return out;
}

namespace {

constexpr long kMaxGeometricLength = 1'000'000;

NormalForm monomial(const PresentationPtr& pres, const std::vector<std::size_t>& positions,
                    const std::vector<Integer>& exps) {
  NormalForm x = pres->identity();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (exps[i] != 0) x = pres->multiply(x, pres->generator_power(positions[i], exps[i]));
  }
  return x;
}

}  // namespace

Chain koszul_contract(const PresentationPtr& pres, const std::vector<std::size_t>& positions,
                      const KoszulBasis& basis, std::size_t degree, const Chain& c) {
  const std::size_t k = positions.size();
  const auto& sources = basis.subsets(degree);
  Chain out;
  if (degree >= k) return out;
  out.assign(basis.subsets(degree + 1).size(), RingElement::zero(pres));
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const auto& subset = sources[s];
    const std::size_t limit = subset.empty() ? k : subset.front();
    for (const auto& [g, coeff] : c[s].terms()) {
      std::vector<Integer> m(k);
      Integer outside = 0;
      for (std::size_t p = 0; p < g.size(); ++p) {
        auto it = std::find(positions.begin(), positions.end(), p);
        if (it == positions.end()) {
          if (g.exponents[p] != 0) outside = 1;
        } else {
          m[static_cast<std::size_t>(it - positions.begin())] = g.exponents[p];
        }
      }
      if (outside != 0) {
        fail(ErrorCode::InvalidArgument, "contraction applies to the free abelian subgroup only, got " + pres->format(g));
      }
      for (std::size_t j = 0; j < limit; ++j) {
        if (m[j] == 0) continue;
        if (abs(m[j]) > kMaxGeometricLength) fail(ErrorCode::InvalidArgument, "exponent too large for contraction");
        std::vector<std::size_t> target = subset;
        target.insert(target.begin(), j);
        const std::size_t t = basis.index_of(target);
        // x_1..x_{j-1} -> 1, geometric sum in x_j, keep x_{j+1}..x_k
        std::vector<Integer> e(k, 0);
        for (std::size_t i = j + 1; i < k; ++i) e[i] = m[i];
        const long n = m[j].get_si();
        const long lo = n > 0 ? 0 : n;
        const long hi = n > 0 ? n : 0;
        const Integer sign = n > 0 ? coeff : Integer(-coeff);
        for (long l = lo; l < hi; ++l) {
          e[j] = l;
          out[t].add_term(monomial(pres, positions, e), sign);
        }
      }
    }
  }
  return out;
}

}  // namespace novikit::detail
