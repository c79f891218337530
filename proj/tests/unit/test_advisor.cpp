#include "doctest.h"
#include "novikit/advisor.hpp"
#include "novikit/report.hpp"
#include "test_support.hpp"

using namespace novikit;

namespace {

PresentationPtr pres(const std::string& name) { return PcPresentation::parse(test::read_corpus(name)); }
FreeComplex load_cx(const std::string& name) { return FreeComplex::parse(test::read_corpus(name), NOVIKIT_CORPUS_DIR); }

AdvisorInput cw(int q, const std::string& p) {
  AdvisorInput in;
  in.kind = SpaceKind::Cw;
  in.dimension = q;
  in.pres = pres(p);
  return in;
}

bool cites(const AdvisorVerdict& v, const std::string& clause) {
  for (const auto& c : v.citations) {
    if (c.clause == clause) return true;
  }
  return false;
}

int strength(AdvisorVerdictKind k) {
  switch (k) {
    case AdvisorVerdictKind::NoConclusion: return 0;
    case AdvisorVerdictKind::NotFgUnlessAspherical: return 1;
    default: return 2;
  }
}

}  // namespace

TEST_CASE("hirsch number above the dimension rules out finite generation") {
  auto v = advise(cw(3, "z4.pc"));
  CHECK(v.verdict == AdvisorVerdictKind::HomotopyNotFg);
  CHECK(v.hirsch == 4);
  CHECK(cites(v, "hirsch-exceeds-dimension"));
}

TEST_CASE("hirsch number near the dimension leaves the aspherical case open") {
  auto v = advise(cw(2, "klein.pc"));
  CHECK(v.verdict == AdvisorVerdictKind::NotFgUnlessAspherical);
  CHECK(cites(v, "hirsch-near-dimension-unless-aspherical"));
  CHECK_FALSE(v.caveats.empty());
}

TEST_CASE("torsion upgrades the near-dimension verdict") {
  auto in = cw(2, "dihedral.pc");
  in.torsion = true;
  auto v = advise(in);
  CHECK(v.verdict == AdvisorVerdictKind::HomotopyNotFg);
  CHECK(cites(v, "torsion-upgrade"));
}

TEST_CASE("nonzero euler characteristic upgrades only with kernel finiteness") {
  auto in = cw(2, "z1.pc");
  in.euler = 1;
  auto without = advise(in);
  CHECK(without.verdict == AdvisorVerdictKind::NotFgUnlessAspherical);
  in.kernel_finite = true;
  auto with = advise(in);
  CHECK(with.verdict == AdvisorVerdictKind::HomotopyNotFg);
  CHECK(cites(with, "euler-characteristic-nonzero"));
}

TEST_CASE("closed four-manifolds point at pi_2") {
  AdvisorInput in;
  in.kind = SpaceKind::Manifold;
  in.dimension = 4;
  in.pres = pres("z4.pc");
  auto v = advise(in);
  CHECK(v.verdict == AdvisorVerdictKind::NotFgSomeLowDegree);
  CHECK(v.targets_pi2);
  CHECK(cites(v, "four-manifold-pi2"));

  in.dimension = 5;
  in.pres = pres("z4.pc");
  auto five = advise(in);
  CHECK(five.verdict == AdvisorVerdictKind::NotFgSomeLowDegree);
  CHECK_FALSE(five.targets_pi2);
  CHECK(five.low_degree == 3);

  in.dimension = 6;
  CHECK(advise(in).verdict == AdvisorVerdictKind::NoConclusion);
}

TEST_CASE("small hirsch number gives no conclusion") {
  CHECK(advise(cw(5, "z2.pc")).verdict == AdvisorVerdictKind::NoConclusion);
  CHECK(advise(cw(3, "q8.pc")).verdict == AdvisorVerdictKind::NoConclusion);
}

TEST_CASE("extra declarations never weaken a verdict") {
  for (const char* p : {"z1.pc", "z2.pc", "z3.pc", "z4.pc", "klein.pc", "sol.pc", "heisenberg.pc", "dihedral.pc"}) {
    for (int q = 1; q <= 6; ++q) {
      auto base = cw(q, p);
      const int s0 = strength(advise(base).verdict);
      for (int mask = 1; mask < 8; ++mask) {
        auto in = base;
        in.torsion = mask & 1;
        in.kernel_finite = mask & 2;
        if (mask & 4) in.euler = 2;
        CHECK(strength(advise(in).verdict) >= s0);
      }
    }
  }
}

TEST_CASE("advisor rejects bad input") {
  CHECK_THROWS_AS(advise(cw(0, "z2.pc")), Error);
  AdvisorInput in;
  in.dimension = 3;
  CHECK_THROWS_AS(advise(in), Error);
}

TEST_CASE("obstruction report on the klein bottle") {
  auto c = load_cx("klein.cx");
  auto u = Character::parse(c.presentation(), "a=0, b=1");
  auto r = obstruction_report(c, u, 32, {false, true});
  CHECK(r.condition1 == "COMPUTED_VANISHING");
  CHECK(r.oracle_agrees);
  CHECK(r.condition3 == "DECLARED");
  CHECK(r.conclusion != "OBSTRUCTED");
}

TEST_CASE("obstruction report on a wedge with free homology") {
  auto c = load_cx("wedge.cx");
  auto u = Character::parse(c.presentation(), "t=1");
  auto r = obstruction_report(c, u, 32, {true, true});
  CHECK(r.condition1 == "COMPUTED_NONVANISHING");
  CHECK(r.conclusion == "OBSTRUCTED");
  CHECK(r.oracle_agrees);
}

TEST_CASE("sol mapping torus is unobstructed once the kernel is declared") {
  auto c = mapping_torus({{2, 1}, {1, 1}});
  auto u = Character::parse(c.presentation(), "a=0, b=0, t=1");
  auto undecided = obstruction_report(c, u, 32, {false, false});
  CHECK(undecided.conclusion == "UNDECIDED");
  CHECK(undecided.condition2 == "AUTO_POLY_Z");
  auto r = obstruction_report(c, u, 32, {false, true});
  CHECK(r.conclusion == "FIBRATION_UNOBSTRUCTED");
  auto j = report::to_json(r);
  CHECK(j["conclusion"] == "FIBRATION_UNOBSTRUCTED");
  CHECK(j["condition1"]["homology"]["verdict"] == "ACYCLIC");
}
