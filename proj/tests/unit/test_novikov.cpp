#include <random>

#include "doctest.h"
#include "novikit/novikov.hpp"
#include "test_support.hpp"

using namespace novikit;

namespace {

NovikovSeries series(const Character& u, const char* expr, std::int64_t prec) {
  return NovikovSeries::embed(RingElement::parse(u.presentation(), expr), u, prec);
}

}  // namespace

TEST_CASE("embedding respects precision") {
  auto t = test::load_pc("z1.pc");
  auto u = Character::parse(t, "t=1");
  auto x = series(u, "1 - t", 10);
  CHECK(x.precision() == 10);
  CHECK(x.format() == "1 - t @prec 10");
  CHECK_THROWS_WITH_AS(series(u, "t^5", 3), doctest::Contains("drops"), Error);
  CHECK(NovikovSeries::embed(RingElement::parse(t, "t^5"), u, 3, true).is_zero());
  auto k = test::load_pc("klein.pc");
  auto v = Character::check(k, {0, 1});
  auto y = series(v, "b + a^-1", 32);
  REQUIRE(y.terms().size() == 2);
  CHECK(y.terms().begin()->first.first == 0);
  CHECK(k->format(y.terms().begin()->first.second) == "a^-1");
  CHECK(std::next(y.terms().begin())->first.first == 1);
  CHECK(NovikovSeries::parse(u, "1 - t @prec 10").format() == x.format());
}

TEST_CASE("products track precision") {
  auto t = test::load_pc("z1.pc");
  auto u = Character::parse(t, "t=1");
  auto geo = series(u, "1 + t + t^2 + t^3 + t^4 + t^5 + t^6 + t^7 + t^8 + t^9", 10);
  auto p = series(u, "1 - t", 10) * geo;
  CHECK(p.precision() == 10);
  CHECK(p.format() == "1 @prec 10");
  auto z = series(u, "1 - t", 10) * NovikovSeries::zero(u, Coefficients::integers(), 7);
  CHECK(z.is_zero());
  CHECK(z.precision() == 7);
  auto k = test::load_pc("klein.pc");
  auto v = Character::check(k, {0, 1});
  auto ab = series(v, "a^-1", 32) * series(v, "b", 32);
  CHECK(ab.to_ring_element() == RingElement::parse(k, "a^-1 b"));
  CHECK_FALSE(ab.to_ring_element() == RingElement::parse(k, "b a^-1"));
  CHECK(ab.valuation() == 1);
}

TEST_CASE("unit certificates") {
  auto t = test::load_pc("z1.pc");
  auto u = Character::parse(t, "t=1");
  auto c = series(u, "t - 1", 32).certify_unit();
  REQUIRE(c);
  CHECK(c->height == 0);
  CHECK(c->coefficient == -1);
  auto k = test::load_pc("klein.pc");
  auto v = Character::check(k, {0, 1});
  auto d = series(v, "b + a^-1", 32).certify_unit();
  REQUIRE(d);
  CHECK(k->format(d->monomial) == "a^-1");
  CHECK_FALSE(series(u, "(1 - t) + (1 + t)", 32).certify_unit());
  CHECK_FALSE(series(u, "1 + t^-1 t^2 - t", 32).certify_unit().has_value() == false);
  CHECK_THROWS_AS(NovikovSeries::zero(u, Coefficients::integers(), 5).certify_unit(), Error);
  CHECK(NovikovSeries::embed(RingElement::parse(t, "2 + t", Coefficients::prime_field(3)), u, 8).certify_unit());
}

TEST_CASE("inverting units") {
  auto t = test::load_pc("z1.pc");
  auto u = Character::parse(t, "t=1");
  auto inv = series(u, "1 - t", 8).invert_unit();
  CHECK(inv.format() == "1 + t + t^2 + t^3 + t^4 + t^5 + t^6 + t^7 @prec 8");
  auto m = NovikovSeries::monomial(u, t->collect("t^3"), -1, Coefficients::integers());
  CHECK(m.invert_unit().format() == "-t^-3 @prec inf");
  CHECK_THROWS_AS(series(u, "2", 8).invert_unit(), Error);

  auto k = test::load_pc("klein.pc");
  auto v = Character::check(k, {0, 1});
  auto x = series(v, "b + a^-1", 16);
  auto y = x.invert_unit();
  CHECK((x * y).is_one());
  CHECK((y * x).is_one());
  CHECK((x * y).precision() == 16);
  // (b + a^-1)^-1 = (sum_k (-ab)^k) a
  NovikovSeries expected = NovikovSeries::zero(v, Coefficients::integers(), 16);
  NovikovSeries term = NovikovSeries::one(v, Coefficients::integers());
  auto neg_ab = series(v, "-a b", 32);
  for (int i = 0; i < 20; ++i) {
    expected += term * series(v, "a", 32);
    term = term * neg_ab;
  }
  CHECK(y.agrees_below(expected, 16));
}

TEST_CASE("geometric series of u-positive matrices") {
  auto t = test::load_pc("z1.pc");
  auto u = Character::parse(t, "t=1");
  const auto zz = Coefficients::integers();
  NovikovMatrix zero(u, zz, 2, 2, 12);
  CHECK(invert_id_minus(zero).is_identity());

  NovikovMatrix a1(u, zz, 1, 1, 6);
  a1.at(0, 0) = series(u, "t", 6);
  CHECK(invert_id_minus(a1).at(0, 0).format() == "1 + t + t^2 + t^3 + t^4 + t^5 @prec 6");

  NovikovMatrix a(u, zz, 2, 2, 12);
  a.at(0, 0) = series(u, "t", 12);
  a.at(0, 1) = series(u, "t", 12);
  a.at(1, 1) = series(u, "t", 12);
  auto b = invert_id_minus(a);
  auto id = NovikovMatrix::identity(u, zz, 2, 12);
  CHECK(((id - a) * b).is_identity());
  CHECK((b * (id - a)).is_identity());

  NovikovMatrix bad(u, zz, 1, 1, 6);
  bad.at(0, 0) = series(u, "1 + t", 6);
  CHECK_THROWS_WITH_AS(invert_id_minus(bad), doctest::Contains("entry (0, 0)"), Error);
}

TEST_CASE("random units invert on both sides") {
  std::mt19937_64 rng(5);
  for (const char* name : {"klein.pc", "z2.pc", "z3.pc"}) {
    auto p = test::load_pc(name);
    auto u = Character::parse(p, *p->default_character());
    for (int trial = 0; trial < 30; ++trial) {
      auto x = test::random_unit(p, u, rng);
      const std::int64_t v = u.height(x.terms().begin()->first);
      auto s = NovikovSeries::embed(x, u, 24 + 2 * std::abs(v) + 8);
      auto y = s.invert_unit();
      auto xy = s * y, yx = y * s;
      CHECK(xy.precision() >= 24);
      CHECK(xy.is_one());
      CHECK(yx.is_one());
    }
  }
}

TEST_CASE("precision soundness of products") {
  std::mt19937_64 rng(6);
  auto p = test::load_pc("klein.pc");
  auto u = Character::parse(p, "b=1");
  for (int trial = 0; trial < 20; ++trial) {
    auto x = test::random_unit(p, u, rng);
    auto lo = NovikovSeries::embed(x, u, 12).invert_unit();
    auto hi = NovikovSeries::embed(x, u, 24).invert_unit();
    CHECK(hi.agrees_below(lo, lo.precision()));
  }
}
