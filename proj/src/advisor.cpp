#include "novikit/advisor.hpp"

#include <algorithm>

namespace novikit {

std::string to_string(AdvisorVerdictKind v) {
  switch (v) {
    case AdvisorVerdictKind::NoConclusion: return "NO_CONCLUSION";
    case AdvisorVerdictKind::NotFgUnlessAspherical: return "NOT_FG_UNLESS_ASPHERICAL";
    case AdvisorVerdictKind::HomotopyNotFg: return "HOMOTOPY_NOT_FG";
    case AdvisorVerdictKind::NotFgSomeLowDegree: return "NOT_FG_SOME_LOW_DEGREE";
  }
  return "NO_CONCLUSION";
}

AdvisorVerdict advise(const AdvisorInput& in) {
  if (!in.pres) fail(ErrorCode::InvalidArgument, "advisor needs a presentation");
  if (in.dimension < 1) fail(ErrorCode::InvalidArgument, "dimension must be at least 1");
  auto consistency = in.pres->check_consistency();
  if (!consistency.consistent()) {
    fail(ErrorCode::InconsistentPresentation, "presentation fails its consistency check");
  }
  AdvisorVerdict v;
  v.hirsch = in.pres->hirsch_number();
  v.poly_z = in.pres->is_poly_z();
  const auto h = static_cast<std::int64_t>(v.hirsch);
  const std::int64_t q = in.dimension;
  const std::string hq = "h = " + std::to_string(h) + ", dimension " + std::to_string(q);

  if (in.kind == SpaceKind::Manifold) {
    if (h >= q - 1) {
      v.verdict = AdvisorVerdictKind::NotFgSomeLowDegree;
      if (q == 4) {
        v.targets_pi2 = true;
        v.low_degree = 2;
        v.citations.push_back({"four-manifold-pi2", hq + ", closed 4-manifold with h >= 3"});
      } else {
        v.low_degree = std::max<int>(in.dimension / 2, 3);
        v.citations.push_back({"manifold-low-degree", hq + ", closed manifold with h >= n - 1"});
      }
    }
  } else if (h > q) {
    v.verdict = AdvisorVerdictKind::HomotopyNotFg;
    v.citations.push_back({"hirsch-exceeds-dimension", hq + ", h > q"});
  } else if (h >= q - 1) {
    v.verdict = AdvisorVerdictKind::NotFgUnlessAspherical;
    v.citations.push_back({"hirsch-near-dimension-unless-aspherical", hq + ", h in {q - 1, q}"});
    if (in.torsion) {
      v.verdict = AdvisorVerdictKind::HomotopyNotFg;
      v.citations.push_back({"torsion-upgrade", "torsion in the fundamental group declared"});
    } else if (in.euler && *in.euler != 0 && in.kernel_finite) {
      v.verdict = AdvisorVerdictKind::HomotopyNotFg;
      v.citations.push_back(
          {"euler-characteristic-nonzero", "chi = " + std::to_string(*in.euler) + " with kernel finiteness declared"});
    }
    if (v.poly_z && v.verdict == AdvisorVerdictKind::NotFgUnlessAspherical) {
      v.citations.push_back({"poly-z-cd-equals-hirsch", "poly-Z fundamental group, so cd = h = " + std::to_string(h)});
    }
  }
  if (in.euler && *in.euler != 0 && !in.kernel_finite && v.verdict == AdvisorVerdictKind::NotFgUnlessAspherical) {
    v.caveats.push_back("nonzero Euler characteristic supplied without kernel finiteness; not used");
  }
  if (v.verdict == AdvisorVerdictKind::NotFgUnlessAspherical) {
    v.caveats.push_back("asphericity is not checked; the verdict does not assert it");
  }
  if (in.kind == SpaceKind::Manifold && in.dimension >= 6 && v.verdict == AdvisorVerdictKind::NotFgSomeLowDegree) {
    v.caveats.push_back("a stronger statement about the universal cover is known in this range; not computed");
  }
  return v;
}

ObstructionReport obstruction_report(const FreeComplex& c, const Character& u, std::int64_t precision,
                                     const ObstructionDeclarations& decl, const std::vector<std::uint64_t>& primes,
                                     const PivotStrategy& strategy) {
  ObstructionReport r;
  r.homology = novikov_homology(c, u, precision, strategy);
  for (std::uint64_t p : primes) {
    auto b = fingerprint(c, u, p);
    const bool zero = std::all_of(b.begin(), b.end(), [](std::size_t x) { return x == 0; });
    if (r.homology.verdict == Verdict::Acyclic && !zero) r.oracle_agrees = false;
    if (r.homology.verdict == Verdict::FreeHomology && b != r.homology.betti) r.oracle_agrees = false;
    r.fingerprints.emplace_back(p, std::move(b));
  }
  switch (r.homology.verdict) {
    case Verdict::Acyclic: r.condition1 = "COMPUTED_VANISHING"; break;
    case Verdict::FreeHomology: r.condition1 = "COMPUTED_NONVANISHING"; break;
    case Verdict::Indeterminate: r.condition1 = "UNDETERMINED"; break;
  }
  const bool poly_z = c.presentation()->is_poly_z();
  if (decl.whitehead_trivial) {
    r.condition2 = "DECLARED";
  } else if (poly_z) {
    r.condition2 = "AUTO_POLY_Z";
    r.citations.push_back({"whitehead-vanishing-poly-z", "fundamental group is poly-Z"});
  } else {
    r.condition2 = "UNKNOWN";
  }
  r.condition3 = decl.kernel_finitely_presented ? "DECLARED" : "UNKNOWN";
  r.citations.push_back({"fibration-conditions", "Novikov homology computed; Whitehead torsion and kernel declared"});
  if (r.condition1 == "COMPUTED_NONVANISHING") {
    r.conclusion = "OBSTRUCTED";
  } else if (r.condition1 == "COMPUTED_VANISHING" && r.condition2 != "UNKNOWN" && r.condition3 == "DECLARED") {
    r.conclusion = "FIBRATION_UNOBSTRUCTED";
  } else {
    r.conclusion = "UNDECIDED";
  }
  if (r.homology.euler != 0) {
    r.citations.push_back({"euler-characteristic-nonzero", "chi = " + std::to_string(r.homology.euler)});
    r.notes.push_back("nonzero Euler characteristic already rules out vanishing Novikov homology");
  }
  if (!r.oracle_agrees) r.notes.push_back("fingerprint oracle disagrees with the reduction verdict");
  return r;
}

}  // namespace novikit
