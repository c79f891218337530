#include <random>

#include "doctest.h"
#include "novikit/pcgroup.hpp"
#include "test_support.hpp"

using namespace novikit;

TEST_CASE("klein presentation collects with the relation") {
  auto p = PcPresentation::parse("gens: a b; order a \xE2\x88\x9E; order b \xE2\x88\x9E; rel: b a b^-1 = a^-1");
  CHECK(p->size() == 2);
  CHECK(p->format(p->collect("a b")) == "b a^-1");
  CHECK(p->format(p->collect("b a")) == "b a");
  CHECK(p->format(p->collect("")) == "1");
  CHECK(p->format(p->multiply(p->collect("a"), p->collect("b"))) == "b a^-1");
  CHECK(p->hirsch_number() == 2);
  CHECK(p->is_poly_z());
  CHECK(p->torsion_status() == TorsionStatus::TorsionFree);
  CHECK(p->check_consistency().consistent());
}

TEST_CASE("free abelian normal forms") {
  auto p = PcPresentation::parse("gens: a b");
  CHECK(p->format(p->collect("a b a")) == "a^2 b");
  CHECK(p->format(p->invert(p->collect("a^2 b"))) == "a^-2 b^-1");
  CHECK(p->format(p->invert(p->identity())) == "1");
  CHECK(p->check_consistency().consistent());
  auto z1 = PcPresentation::parse("gens: a; order a: inf");
  CHECK(z1->hirsch_number() == 1);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_WITH_AS(PcPresentation::parse("gens: a b\nrel: c a = a"), doctest::Contains("undeclared generator"),
                       Error);
  CHECK_THROWS_AS(PcPresentation::parse("gens: a\nrel: a ^ = a"), Error);
  try {
    PcPresentation::parse("gens: a b\nrel: a b ) = a");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Syntax);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("contradictory relation fails consistency") {
  auto p = PcPresentation::parse("gens: a b\nrel: b a b^-1 = a^-1\nrel: b a = a b");
  auto report = p->check_consistency();
  REQUIRE_FALSE(report.consistent());
  const auto* bad = report.first_failure();
  REQUIRE(bad != nullptr);
  CHECK(bad->identity == "b a = a b");
  CHECK(p->format(bad->lhs) == "b a");
  CHECK(p->format(bad->rhs) == "b a^-1");
}

TEST_CASE("hirsch numbers and torsion status") {
  CHECK(test::load_pc("z3.pc")->hirsch_number() == 3);
  auto d = test::load_pc("dihedral.pc");
  CHECK(d->hirsch_number() == 1);
  CHECK_FALSE(d->is_poly_z());
  CHECK(d->torsion_status() == TorsionStatus::Unknown);
  CHECK(d->check_consistency().consistent());
}

TEST_CASE("characters") {
  auto k = test::load_pc("klein.pc");
  auto u = Character::check(k, {0, 1});
  CHECK(u.evaluate(k->collect("b^3 a^-2")) == 3);
  CHECK(u.evaluate(k->identity()) == 0);
  CHECK_THROWS_WITH_AS(Character::check(k, {1, 1}), doctest::Contains("b a b^-1 = a^-1"), Error);
  auto z2 = test::load_pc("z2.pc");
  auto v = Character::check(z2, {2, -1});
  CHECK(v.evaluate(z2->collect("a b^4")) == -2);
  CHECK(Character::parse(z2, "b=7").declared_values() == std::vector<std::int64_t>{0, 7});
  auto d = test::load_pc("dihedral.pc");
  CHECK_THROWS_AS(Character::check(d, {0, 1}), Error);
}

TEST_CASE("sol group collection") {
  auto s = test::load_pc("sol.pc");
  CHECK(s->check_consistency().consistent());
  CHECK(s->format(s->collect("t a t^-1")) == s->format(s->collect("a^2 b")));
  CHECK(s->format(s->collect("t b t^-1")) == s->format(s->collect("a b")));
  CHECK(s->format(s->collect("t^-1 a t")) == s->format(s->collect("a b^-1")));
  CHECK(s->format(s->collect("t^-1 b t")) == s->format(s->collect("a^-1 b^2")));
  // t^60 conjugation produces large exponents without blowing up
  auto x = s->collect("t^60 a t^-60");
  CHECK(s->multiply(s->collect("t^60"), s->collect("a")) == s->multiply(x, s->collect("t^60")));
}

TEST_CASE("finite groups enumerate to the product of relative orders") {
  for (const char* name : {"s3.pc", "q8.pc"}) {
    auto p = test::load_pc(name);
    CHECK(p->check_consistency().consistent());
    CHECK(p->hirsch_number() == 0);
    std::vector<NormalForm> elems{p->identity()};
    std::size_t frontier = 0;
    while (frontier < elems.size()) {
      for (std::size_t g = 0; g < p->size(); ++g) {
        auto y = p->multiply(elems[frontier], p->generator_power(g));
        if (std::find(elems.begin(), elems.end(), y) == elems.end()) elems.push_back(y);
      }
      ++frontier;
    }
    std::int64_t order = 1;
    for (std::size_t g = 0; g < p->size(); ++g) order *= p->generator(g).relative_order;
    CHECK(static_cast<std::int64_t>(elems.size()) == order);
  }
  auto q = test::load_pc("q8.pc");
  CHECK(q->format(q->collect("a^4")) == "1");
  CHECK(q->format(q->collect("a b a^-1 b^-1")) == "c");
}

TEST_CASE("serialization round trip") {
  for (const char* name : {"klein.pc", "sol.pc", "q8.pc", "dihedral.pc", "heisenberg.pc"}) {
    auto p = test::load_pc(name);
    auto q = PcPresentation::parse(p->serialize());
    CHECK(q->serialize() == p->serialize());
  }
}

TEST_CASE("group axioms on random words") {
  std::mt19937_64 rng(7);
  for (const char* name : {"klein.pc", "sol.pc", "heisenberg.pc", "dihedral.pc", "q8.pc"}) {
    auto p = test::load_pc(name);
    for (int trial = 0; trial < 50; ++trial) {
      auto w1 = test::random_word(*p, rng, 8);
      auto w2 = test::random_word(*p, rng, 8);
      auto w3 = test::random_word(*p, rng, 8);
      auto x = p->collect(w1), y = p->collect(w2), z = p->collect(w3);
      CHECK(p->multiply(p->multiply(x, y), z) == p->multiply(x, p->multiply(y, z)));
      CHECK(p->multiply(x, p->invert(x)).is_identity());
      CHECK(p->multiply(p->invert(x), x).is_identity());
      CHECK(p->power(x, 3) == p->multiply(x, p->multiply(x, x)));
    }
  }
}
