#include <random>

#include "doctest.h"
#include "novikit/groupring.hpp"
#include "test_support.hpp"

using namespace novikit;

TEST_CASE("group ring products follow collection") {
  auto k = test::load_pc("klein.pc");
  auto a = RingElement::parse(k, "a");
  auto b = RingElement::parse(k, "b");
  CHECK((b * a).format() == "b*a");
  CHECK((a * b).format() == "b*a^-1");
  auto t = test::load_pc("z1.pc");
  auto x = RingElement::parse(t, "(1 - t)(1 + t)");
  CHECK(x == RingElement::parse(t, "1 - t^2"));
  CHECK(RingElement::parse(t, "1-t^2").format() == "1 - t^2");
}

TEST_CASE("expression parser") {
  auto z2 = test::load_pc("z2.pc");
  auto e = RingElement::parse(z2, "1 - a*b^-1 + 3*b^2");
  CHECK(e.size() == 3);
  CHECK(e.augmentation() == 3);
  CHECK(RingElement::parse(z2, "(a b)^-2") == RingElement::parse(z2, "a^-2 b^-2"));
  CHECK(RingElement::parse(z2, "(1+a)^2") == RingElement::parse(z2, "1 + 2a + a^2"));
  CHECK_THROWS_WITH_AS(RingElement::parse(z2, "(1+a)^-1"), doctest::Contains("monomials"), Error);
  CHECK_THROWS_WITH_AS(RingElement::parse(z2, "a + c"), doctest::Contains("undeclared generator"), Error);
  CHECK_THROWS_AS(RingElement::parse(z2, "a +"), Error);
  CHECK(RingElement::parse(z2, "a - a").is_zero());
  CHECK(RingElement::parse(z2, "0").format() == "0");
}

TEST_CASE("involution and augmentation") {
  auto k = test::load_pc("klein.pc");
  CHECK(RingElement::parse(k, "b + a^-1").involution() == RingElement::parse(k, "b^-1 + a"));
  CHECK(RingElement::one(k).involution() == RingElement::one(k));
  auto t = test::load_pc("z1.pc");
  CHECK(RingElement::parse(t, "t - 1").augmentation() == 0);
  auto z2 = test::load_pc("z2.pc");
  CHECK(RingElement::parse(z2, "3a + 2b").augmentation() == 5);
}

TEST_CASE("heights and u-positivity") {
  auto k = test::load_pc("klein.pc");
  auto u = Character::check(k, {0, 1});
  auto x = RingElement::parse(k, "b + a^-1");
  auto [lo, hi] = x.height_range(u);
  CHECK(lo == 0);
  CHECK(hi == 1);
  CHECK_FALSE(x.is_u_positive(u));
  CHECK(RingElement::zero(k).is_u_positive(u));
  CHECK_THROWS_AS(RingElement::zero(k).height_range(u), Error);
  auto t = test::load_pc("z1.pc");
  auto v = Character::check(t, {1});
  CHECK(RingElement::parse(t, "t").height_range(v) == std::pair<Integer, Integer>{1, 1});
  CHECK(RingElement::parse(t, "t").is_u_positive(v));
}

TEST_CASE("prime field coefficients") {
  auto t = test::load_pc("z1.pc");
  auto f3 = Coefficients::prime_field(3);
  auto x = RingElement::parse(t, "4 + 3t - t^2", f3);
  CHECK(x == RingElement::parse(t, "1 + 2t^2", f3));
  CHECK(x.augmentation() == 0);
  CHECK_THROWS_AS(Coefficients::prime_field(4), Error);
}

TEST_CASE("ring axioms on random elements") {
  std::mt19937_64 rng(11);
  for (const char* name : {"klein.pc", "sol.pc", "heisenberg.pc", "q8.pc"}) {
    auto p = test::load_pc(name);
    for (int trial = 0; trial < 20; ++trial) {
      auto x = test::random_element(p, rng, 3, 4);
      auto y = test::random_element(p, rng, 3, 4);
      auto z = test::random_element(p, rng, 3, 4);
      CHECK((x * y) * z == x * (y * z));
      CHECK(x * (y + z) == x * y + x * z);
      CHECK((x + y) * z == x * z + y * z);
      CHECK(x * RingElement::one(p) == x);
      CHECK((x * y).involution() == y.involution() * x.involution());
      CHECK(x.involution().involution() == x);
      CHECK((x * y).augmentation() == x.augmentation() * y.augmentation());
    }
  }
}

TEST_CASE("u-positive elements are closed under products") {
  std::mt19937_64 rng(12);
  auto s = test::load_pc("sol.pc");
  auto u = Character::parse(s, "t=1");
  for (int trial = 0; trial < 30; ++trial) {
    auto x = test::random_positive_element(s, u, rng, 3);
    auto y = test::random_positive_element(s, u, rng, 3);
    REQUIRE(x.is_u_positive(u));
    CHECK((x * y).is_u_positive(u));
  }
}
