#include "doctest.h"
#include "novikit/sigma.hpp"
#include "test_support.hpp"

using namespace novikit;

namespace {

Resolution load_res(const std::string& name) { return Resolution::parse(test::read_corpus(name), NOVIKIT_CORPUS_DIR); }

std::vector<RingMatrix> scalar_phi(const Resolution& res, const char* expr) {
  const auto& c = res.complex();
  std::vector<RingMatrix> phi;
  auto x = RingElement::parse(c.presentation(), expr);
  for (std::size_t j = 0; j < c.num_degrees(); ++j) {
    RingMatrix m(c.presentation(), c.rank(j), c.rank(j));
    for (std::size_t i = 0; i < c.rank(j); ++i) m.at(i, i) = x;
    phi.push_back(m);
  }
  return phi;
}

}  // namespace

TEST_CASE("valuations") {
  auto res = load_res("circle.res");
  auto p = res.complex().presentation();
  auto u = Character::parse(p, "t=1");
  ValuationAssignment va{u, {0, 0}};
  CHECK(valuation(va, 0, {RingElement::parse(p, "t - 1")}) == 0);
  CHECK_FALSE(valuation(va, 0, {RingElement::zero(p)}).has_value());
  ValuationAssignment shifted{u, {-2, 0}};
  CHECK(valuation(shifted, 0, {RingElement::parse(p, "t^3")}) == 1);
  CHECK(check_valuation_condition(res, va).ok);
  auto bad = check_valuation_condition(res, {u, {0, 5}});
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.failures.size() == 1);
  CHECK(bad.failures[0].lhs == 5);
  CHECK(bad.failures[0].rhs == 0);
  CHECK(bad.suggested_nu == std::vector<std::int64_t>{0, 0});
  CHECK(check_valuation_condition(res, {u, bad.suggested_nu}).ok);
}

TEST_CASE("augmentation is checked") {
  CHECK_THROWS_AS(Resolution::parse("gens: t\nkoszul:\naug: [2]\n"), Error);
  CHECK_THROWS_AS(Resolution::parse("gens: t\nkoszul:\n"), Error);
}

TEST_CASE("circle witness") {
  auto res = load_res("circle.res");
  auto w = Witness::parse(res, test::read_corpus("circle.wit"));
  auto u = Character::parse(res.complex().presentation(), "t=1");
  CHECK(verify_sigma_witness(res, w.phi, u).accepted);
  CHECK(verify_homotopy(res, w.phi, w.s).accepted);
  auto id = scalar_phi(res, "1");
  auto r = verify_sigma_witness(res, id, u);
  CHECK_FALSE(r.accepted);
  REQUIRE_FALSE(r.reasons.empty());
  CHECK(r.reasons[0].find("not u-positive") != std::string::npos);
  CHECK_FALSE(verify_sigma_witness(res, scalar_phi(res, "t^-1"), u).accepted);
  CHECK(verify_homotopy(res, id, {}).accepted);
  CHECK_FALSE(verify_homotopy(res, w.phi, {}).accepted);
  // lifts of the identity compose
  std::vector<RingMatrix> sq;
  for (const auto& m : w.phi) sq.push_back(RingMatrix::compose(m, m));
  CHECK(verify_sigma_witness(res, sq, u).accepted);
}

TEST_CASE("finish executor on the circle") {
  auto res = load_res("circle.res");
  auto w = Witness::parse(res, test::read_corpus("circle.wit"));
  auto p = res.complex().presentation();
  auto u = Character::parse(p, "t=1");
  auto cert = finish_executor(res, w.phi, w.s, Representation::trivial(p), u, 16);
  CHECK(cert.certified);
  REQUIRE(cert.inverses.size() == 2);
  // B = 1 + t + t^2 + ...
  const auto& b = cert.inverses[0].at(0, 0);
  CHECK(b.terms().size() == static_cast<std::size_t>(b.precision()));
  for (const auto& [key, coeff] : b.terms()) CHECK(coeff == 1);
  CHECK_THROWS_AS(finish_executor(res, scalar_phi(res, "1"), {}, Representation::trivial(p), u, 16), Error);
}

TEST_CASE("finish executor on the Koszul resolution of Z^2") {
  auto res = load_res("z2.res");
  auto p = res.complex().presentation();
  auto u = Character::parse(p, "a=1, b=0");
  auto phi = scalar_phi(res, "a");
  auto s = koszul_homotopy(res, phi);
  CHECK(verify_sigma_witness(res, phi, u).accepted);
  CHECK(verify_homotopy(res, phi, s).accepted);
  CHECK(finish_executor(res, phi, s, Representation::trivial(p), u, 16).certified);
  auto other = scalar_phi(res, "a*b^2");
  CHECK(verify_homotopy(res, other, koszul_homotopy(res, other)).accepted);
}

TEST_CASE("Koszul homotopy in three variables") {
  auto res = Resolution::koszul(test::load_pc("z3.pc"));
  auto phi = scalar_phi(res, "a*b^-1*c^2");
  CHECK(verify_homotopy(res, phi, koszul_homotopy(res, phi)).accepted);
}

TEST_CASE("twisting by representations") {
  auto res = load_res("circle.res");
  auto p = res.complex().presentation();
  auto u = Character::parse(p, "t=1");
  auto w = Witness::parse(res, test::read_corpus("circle.wit"));
  auto plain = tensor_with_rep(res, Representation::trivial(p), u, 16, w.phi);
  auto base = base_change_novikov(res.complex(), u, 16);
  CHECK(plain.complex.d[1].agrees_below(base.d[1], 16));
  CHECK(plain.psi[1].at(0, 0).format() == "t @prec 16");

  Representation sign(p, {{"t", {{-1}}}});
  auto twisted = tensor_with_rep(res, sign, u, 16, w.phi);
  CHECK(twisted.psi[0].at(0, 0).format() == "-t @prec 16");
  CHECK(twisted.complex.d[1].at(0, 0).format() == "-1 - t @prec 16");
  CHECK(finish_executor(res, w.phi, w.s, sign, u, 16).certified);

  Representation swap(p, {{"t", {{0, 1}, {1, 0}}}});
  auto doubled = tensor_with_rep(res, swap, u, 16, w.phi);
  CHECK(doubled.complex.ranks == std::vector<std::size_t>{2, 2});
  CHECK(doubled.complex.d_squared_vanishes());
  CHECK(finish_executor(res, w.phi, w.s, swap, u, 16).certified);

  auto k = test::load_pc("klein.pc");
  CHECK_THROWS_AS(Representation(k, {{"a", {{2}}}}), Error);
  // b a b^-1 = a^-1 forces rho(a) = rho(a)^-1 when rho(b) is trivial
  CHECK_THROWS_AS(Representation(k, {{"a", {{1, 1}, {0, 1}}}}), Error);
  CHECK_NOTHROW(Representation(k, {{"a", {{-1}}}}));
}
