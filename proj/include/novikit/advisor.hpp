#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "novikit/complex.hpp"
#include "novikit/pcgroup.hpp"
#include "novikit/reduction.hpp"

namespace novikit {

enum class SpaceKind { Cw, Manifold };

/// Declarations are user assertions and are echoed back, never verified.
struct AdvisorInput {
  SpaceKind kind = SpaceKind::Cw;
  int dimension = 0;
  PresentationPtr pres;
  bool torsion = false;
  std::optional<std::int64_t> euler;
  bool whitehead_trivial = false;
  bool kernel_finite = false;
};

enum class AdvisorVerdictKind { NoConclusion, NotFgUnlessAspherical, HomotopyNotFg, NotFgSomeLowDegree };
std::string to_string(AdvisorVerdictKind v);

/// A rule that fired: stable id plus the condition it checked on this input.
struct Citation {
  std::string clause;
  std::string condition;
};

struct AdvisorVerdict {
  AdvisorVerdictKind verdict = AdvisorVerdictKind::NoConclusion;
  std::size_t hirsch = 0;
  bool poly_z = false;
  std::optional<int> low_degree;  // r for NotFgSomeLowDegree
  bool targets_pi2 = false;
  std::vector<Citation> citations;
  std::vector<std::string> caveats;
};

AdvisorVerdict advise(const AdvisorInput& input);

struct ObstructionDeclarations {
  bool whitehead_trivial = false;
  bool kernel_finitely_presented = false;
};

struct ObstructionReport {
  BettiReport homology;
  std::vector<std::pair<std::uint64_t, std::vector<std::size_t>>> fingerprints;
  bool oracle_agrees = true;
  std::string condition1;  // COMPUTED_VANISHING, COMPUTED_NONVANISHING, UNDETERMINED
  std::string condition2;  // DECLARED, AUTO_POLY_Z, UNKNOWN
  std::string condition3;  // DECLARED, UNKNOWN
  std::string conclusion;  // FIBRATION_UNOBSTRUCTED, OBSTRUCTED, UNDECIDED
  std::vector<Citation> citations;
  std::vector<std::string> notes;
};

ObstructionReport obstruction_report(const FreeComplex& c, const Character& u, std::int64_t precision,
                                     const ObstructionDeclarations& decl,
                                     const std::vector<std::uint64_t>& primes = {2, 3, 5},
                                     const PivotStrategy& strategy = {});

}  // namespace novikit
