#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "novikit/complex.hpp"
#include "novikit/novikov.hpp"

namespace novikit {

/// How the next pivot is chosen among certified entries.
struct PivotStrategy {
  enum class Kind { LowestHeight, Sparse, Random };
  Kind kind = Kind::LowestHeight;
  std::uint64_t seed = 0;

  /// "lowest" (default), "sparse", or "random:SEED".
  static PivotStrategy parse(const std::string& text);
  std::string name() const;
};

/// One cancellation: basis element `source` of degree k against `target` of
/// degree k-1. Indices refer to the complex just before the move.
struct ReductionMove {
  std::size_t degree = 0;
  std::size_t source_index = 0;
  std::size_t target_index = 0;
  std::string source;
  std::string target;
  UnitCertificate pivot;
  std::string pivot_text;
};

struct ReductionTrace {
  std::vector<ReductionMove> moves;
};

using ReductionObserver = std::function<void(const ReductionMove&, const NovikovComplex&)>;

/// Cancels the pair joined by the certified unit d_k(row, col) in place.
/// Throws NotAUnit if the entry does not certify.
ReductionMove eliminate(NovikovComplex& c, std::size_t k, std::size_t row, std::size_t col);

/// Eliminates until no boundary entry certifies. d o d = 0 is re-checked
/// after every move; a failure throws PrecisionExhausted.
NovikovComplex reduce(const NovikovComplex& c, ReductionTrace& trace, const PivotStrategy& strategy = {},
                      const ReductionObserver& observer = {});

/// Re-runs the moves of a trace.
NovikovComplex replay(const NovikovComplex& c, const ReductionTrace& trace);

enum class Verdict { Acyclic, FreeHomology, Indeterminate };
std::string to_string(Verdict v);

struct BettiReport {
  Verdict verdict = Verdict::Indeterminate;
  std::vector<std::size_t> betti;          // residual ranks (the betti numbers when free)
  std::int64_t euler = 0;                  // of the input complex
  std::int64_t precision = 0;              // of the residual
  ReductionTrace trace;
  NovikovComplex residual;

  /// H_i is certified zero: the residual has nothing in degree i.
  bool vanishes_in(std::size_t i) const { return i >= betti.size() || betti[i] == 0; }
};

/// Classifies a residual and enforces the Euler characteristic identities.
BettiReport verdict(const NovikovComplex& residual, ReductionTrace trace, std::int64_t euler);

BettiReport novikov_homology(const FreeComplex& c, const Character& u, std::int64_t precision,
                             const PivotStrategy& strategy = {}, const ReductionObserver& observer = {});

/// One tested degree of the duality implication.
struct DualityCheck {
  std::string source;  // "-u" or "u": the side whose low-degree vanishing is used
  int l = -1;          // largest l with H_i(source) = 0 for all i <= l
  std::size_t degree = 0;
  std::string status;  // "holds", "violated", "untested"
};

struct DualityReport {
  int dimension = 0;
  BettiReport plus;
  BettiReport minus;
  std::vector<DualityCheck> checks;
  bool violated() const;
};

/// Requires a manifold-dim tag equal to the top degree.
DualityReport duality_check(const FreeComplex& c, const Character& u, std::int64_t precision,
                            const PivotStrategy& strategy = {});

}  // namespace novikit
