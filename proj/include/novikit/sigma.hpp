#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "novikit/complex.hpp"
#include "novikit/novikov.hpp"

namespace novikit {

/// Based free resolution P_m -> ... -> P_0 -> Z with an integer augmentation row.
class Resolution {
 public:
  Resolution() = default;
  /// Requires an augmentation with eps o d_1 = 0 and gcd of its entries 1.
  explicit Resolution(FreeComplex c);
  static Resolution parse(std::string_view text, const std::string& base_dir = ".");
  /// Koszul resolution of the free abelian group on all generators,
  /// augmented by 1 on the single 0-cell.
  static Resolution koszul(const PresentationPtr& pres);

  const FreeComplex& complex() const { return c_; }
  const std::vector<Integer>& augmentation() const { return *c_.augmentation(); }
  std::size_t length() const { return c_.top_degree(); }

 private:
  FreeComplex c_;
};

/// Per-degree shifts nu_j for a valuation extending u.
struct ValuationAssignment {
  Character u;
  std::vector<std::int64_t> nu;
};

/// v_j of a module element given by its coordinates; nullopt is +infinity.
std::optional<std::int64_t> valuation(const ValuationAssignment& va, std::size_t degree,
                                      const std::vector<RingElement>& coords);

struct ValuationFailure {
  std::size_t degree = 0;
  std::size_t basis = 0;
  std::string label;
  std::int64_t lhs = 0;  // v_j(e)
  std::int64_t rhs = 0;  // v_{j-1}(d e)
};

struct ValuationReport {
  bool ok = true;
  std::vector<ValuationFailure> failures;
  std::vector<std::int64_t> suggested_nu;  // largest shifts that pass, keeping nu_0
};

ValuationReport check_valuation_condition(const Resolution& res, const ValuationAssignment& va);

/// Per-degree matrices: phi[j] is rank_j x rank_j, s[j] is rank_{j+1} x rank_j.
struct Witness {
  std::vector<RingMatrix> phi;
  std::vector<RingMatrix> s;
  std::map<std::string, std::vector<std::vector<Integer>>> rho;  // by generator name

  static Witness parse(const Resolution& res, std::string_view text);
};

struct WitnessReport {
  bool accepted = false;
  std::vector<std::string> reasons;  // empty when accepted
};

/// Chain-map identity, eps o Phi_0 = eps, and u-positivity of every Phi_j.
/// Acceptance certifies that u lies in the invariant; rejection certifies nothing.
WitnessReport verify_sigma_witness(const Resolution& res, const std::vector<RingMatrix>& phi, const Character& u);

/// d s + s d = Phi - Id in every degree; missing s_j count as zero.
WitnessReport verify_homotopy(const Resolution& res, const std::vector<RingMatrix>& phi,
                              const std::vector<RingMatrix>& s);

/// s_j(e) = h(Phi e - e - s_{j-1}(d e)) from the contraction h of a Koszul
/// resolution; needs eps o Phi_0 = eps.
std::vector<RingMatrix> koszul_homotopy(const Resolution& res, const std::vector<RingMatrix>& phi);

/// Integer matrices for each generator, checked against every relation.
class Representation {
 public:
  Representation() = default;
  /// Generators missing from `by_name` act trivially; every matrix must be
  /// invertible over the integers and r x r.
  Representation(PresentationPtr pres, const std::map<std::string, std::vector<std::vector<Integer>>>& by_name);
  static Representation trivial(PresentationPtr pres);

  std::size_t dimension() const { return r_; }
  std::vector<std::vector<Integer>> evaluate(const NormalForm& g) const;

 private:
  PresentationPtr pres_;
  std::size_t r_ = 1;
  std::vector<std::vector<std::vector<Integer>>> fwd_, inv_;  // per pc position
};

struct TensoredComplex {
  NovikovComplex complex;
  std::vector<NovikovMatrix> psi;  // empty unless phi was supplied
};

/// Diagonal-action base change P (x) (Z^r (x) Lambda_u) in the basis e_i (x) f_s.
TensoredComplex tensor_with_rep(const Resolution& res, const Representation& rho, const Character& u,
                                std::int64_t precision, const std::vector<RingMatrix>& phi = {});

struct FinishDegree {
  std::size_t degree = 0;
  std::size_t rank = 0;
  std::int64_t precision = 0;
  bool left_inverse = false;
  bool right_inverse = false;
  bool chain_map = false;
  bool null_homotopic = false;
};

struct FinishCertificate {
  bool certified = false;
  std::int64_t precision = 0;
  std::vector<FinishDegree> degrees;
  std::vector<NovikovMatrix> inverses;  // B_j = (Id - Psi_j)^-1
  std::vector<std::string> reasons;
};

/// Builds Psi, inverts Id - Psi in each degree and checks that it is a chain
/// map homotopic to zero, so the tensored complex is acyclic up to precision.
FinishCertificate finish_executor(const Resolution& res, const std::vector<RingMatrix>& phi,
                                  const std::vector<RingMatrix>& s, const Representation& rho, const Character& u,
                                  std::int64_t precision);

}  // namespace novikit
