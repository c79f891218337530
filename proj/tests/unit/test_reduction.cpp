#include <random>

#include "doctest.h"
#include "novikit/reduction.hpp"
#include "test_support.hpp"

using namespace novikit;

namespace {

FreeComplex load_cx(const std::string& name) { return FreeComplex::parse(test::read_corpus(name), NOVIKIT_CORPUS_DIR); }

FreeComplex sol() { return mapping_torus({{2, 1}, {1, 1}}); }

bool same_complex(const NovikovComplex& a, const NovikovComplex& b, std::int64_t below) {
  if (a.ranks != b.ranks) return false;
  for (std::size_t k = 1; k < a.d.size(); ++k) {
    if (!a.d[k].agrees_below(b.d[k], below)) return false;
  }
  return true;
}

Character random_character(const PresentationPtr& p, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> v(-3, 3);
  while (true) {
    std::vector<std::int64_t> vals;
    for (std::size_t i = 0; i < p->size(); ++i) vals.push_back(v(rng));
    auto u = Character::check(p, vals);
    if (!u.is_zero()) return u;
  }
}

}  // namespace

TEST_CASE("klein bottle reduces in two moves") {
  auto c = load_cx("klein.cx");
  auto u = Character::parse(c.presentation(), "a=0, b=1");
  auto r = novikov_homology(c, u, 32);
  CHECK(r.verdict == Verdict::Acyclic);
  REQUIRE(r.trace.moves.size() == 2);
  CHECK(r.trace.moves[0].degree == 1);
  CHECK(r.trace.moves[0].source == "b");
  CHECK(r.trace.moves[0].target == "*");
  CHECK(r.trace.moves[1].degree == 2);
  CHECK(r.trace.moves[1].source == "r1");
  CHECK(r.trace.moves[1].target == "a");
  CHECK(r.euler == 0);
}

TEST_CASE("circle and wedge") {
  auto s = load_cx("circle.cx");
  auto r = novikov_homology(s, Character::parse(s.presentation(), "t=1"), 32);
  CHECK(r.verdict == Verdict::Acyclic);
  CHECK(r.trace.moves.size() == 1);
  auto w = load_cx("wedge.cx");
  auto rw = novikov_homology(w, Character::parse(w.presentation(), "t=1"), 32);
  CHECK(rw.verdict == Verdict::FreeHomology);
  CHECK(rw.betti == std::vector<std::size_t>{0, 0, 1});
  CHECK(rw.euler == 1);
}

TEST_CASE("non-unit leading coefficient is indeterminate") {
  auto c = FreeComplex::parse("gens: t\ndegree 0 rank 1\ndegree 1 rank 1\nd 1: [[2*t - 2]]\n");
  auto r = novikov_homology(c, Character::parse(c.presentation(), "t=1"), 32);
  CHECK(r.verdict == Verdict::Indeterminate);
  CHECK(r.trace.moves.empty());
}

TEST_CASE("tori are acyclic for random characters") {
  std::mt19937_64 rng(11);
  for (const char* name : {"torus.cx", "t3.cx"}) {
    auto c = load_cx(name);
    for (int n = 0; n < 20; ++n) {
      auto u = random_character(c.presentation(), rng);
      auto r = novikov_homology(c, u, 32);
      CHECK_MESSAGE(r.verdict == Verdict::Acyclic, name << " u=" << u.format());
      for (std::uint64_t p : {2, 3, 5}) CHECK(fingerprint(c, u, p) == std::vector<std::size_t>(c.num_degrees(), 0));
    }
  }
}

TEST_CASE("sol mapping torus is acyclic") {
  auto c = sol();
  auto r = novikov_homology(c, Character::parse(c.presentation(), "t=1"), 32);
  CHECK(r.verdict == Verdict::Acyclic);
  CHECK(fingerprint(c, Character::parse(c.presentation(), "t=1"), 3) == std::vector<std::size_t>{0, 0, 0, 0});
}

TEST_CASE("product with a sphere has free homology") {
  auto s = product_with_sphere(load_cx("circle.cx"), 2);
  auto r = novikov_homology(s, Character::parse(s.presentation(), "t=1"), 32);
  CHECK(r.verdict == Verdict::Acyclic);
  auto w = product_with_sphere(load_cx("wedge.cx"), 2);
  auto rw = novikov_homology(w, Character::parse(w.presentation(), "t=1"), 32);
  CHECK(rw.verdict == Verdict::FreeHomology);
  CHECK(rw.betti == std::vector<std::size_t>{0, 0, 1, 0, 1});
  CHECK(fingerprint(w, Character::parse(w.presentation(), "t=1"), 5) == rw.betti);
}

TEST_CASE("replaying a trace reproduces the residual") {
  auto c = load_cx("t3.cx");
  auto u = Character::parse(c.presentation(), "a=1, b=-2, c=1");
  auto nc = base_change_novikov(c, u, 32);
  ReductionTrace trace;
  auto out = reduce(nc, trace, PivotStrategy::parse("sparse"));
  auto again = replay(nc, trace);
  CHECK(same_complex(out, again, out.precision()));
}

TEST_CASE("verdicts do not depend on pivot order") {
  struct Case {
    FreeComplex c;
    const char* u;
    std::int64_t prec;
  };
  std::vector<Case> cases{{load_cx("klein.cx"), "a=0, b=1", 32},
                          {load_cx("torus.cx"), "a=1, b=2", 32},
                          {load_cx("t3.cx"), "a=1, b=0, c=-1", 32},
                          {load_cx("wedge.cx"), "t=1", 32},
                          {product_with_sphere(load_cx("torus.cx"), 2), "a=0, b=1", 32},
                          {sol(), "t=1", 8}};
  for (auto& cs : cases) {
    auto u = Character::parse(cs.c.presentation(), cs.u);
    auto base = novikov_homology(cs.c, u, cs.prec);
    std::vector<std::string> strategies{"sparse"};
    for (int seed = 1; seed <= 8; ++seed) strategies.push_back("random:" + std::to_string(seed));
    for (const auto& s : strategies) {
      std::size_t moves = 0;
      auto r = novikov_homology(cs.c, u, cs.prec, PivotStrategy::parse(s), [&](const ReductionMove&, const NovikovComplex& now) {
        ++moves;
        CHECK(now.d_squared_vanishes());
      });
      CHECK(moves == r.trace.moves.size());
      CHECK(r.verdict == base.verdict);
      CHECK(r.betti == base.betti);
    }
  }
}

TEST_CASE("strategies parse") {
  CHECK(PivotStrategy::parse("").kind == PivotStrategy::Kind::LowestHeight);
  CHECK(PivotStrategy::parse("random:42").seed == 42);
  CHECK(PivotStrategy::parse("random:42").name() == "random:42");
  CHECK_THROWS_AS(PivotStrategy::parse("random:x"), Error);
  CHECK_THROWS_AS(PivotStrategy::parse("greedy"), Error);
}

TEST_CASE("reductions at higher precision agree below the lower one") {
  struct Case {
    FreeComplex c;
    const char* u;
  };
  std::vector<Case> cases{{load_cx("klein.cx"), "a=0, b=1"}, {load_cx("torus.cx"), "a=1, b=0"},
                          {load_cx("t3.cx"), "a=0, b=1, c=0"}, {sol(), "t=1"}};
  for (auto& cs : cases) {
    auto u = Character::parse(cs.c.presentation(), cs.u);
    std::vector<NovikovComplex> low, high;
    auto r32 = novikov_homology(cs.c, u, 32, {}, [&](const ReductionMove&, const NovikovComplex& n) { low.push_back(n); });
    auto r64 = novikov_homology(cs.c, u, 64, {}, [&](const ReductionMove&, const NovikovComplex& n) { high.push_back(n); });
    CHECK(r32.verdict == r64.verdict);
    REQUIRE(low.size() == high.size());
    for (std::size_t i = 0; i < low.size(); ++i) CHECK(same_complex(low[i], high[i], low[i].precision()));
  }
}

TEST_CASE("duality harness") {
  auto k = load_cx("klein.cx");
  auto rk = duality_check(k, Character::parse(k.presentation(), "a=0, b=1"), 32);
  CHECK_FALSE(rk.violated());
  CHECK(rk.plus.verdict == Verdict::Acyclic);
  CHECK(rk.minus.verdict == Verdict::Acyclic);
  CHECK(rk.checks.size() == 6);
  auto t = load_cx("torus.cx");
  CHECK_FALSE(duality_check(t, Character::parse(t.presentation(), "a=1, b=0"), 32).violated());
  try {
    duality_check(load_cx("wedge.cx"), Character::parse(load_cx("wedge.cx").presentation(), "t=1"), 32);
    FAIL("wedge must be refused");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAManifold);
  }
}
