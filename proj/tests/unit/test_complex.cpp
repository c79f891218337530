#include <random>

#include "doctest.h"
#include "novikit/complex.hpp"
#include "test_support.hpp"

using namespace novikit;

namespace {

FreeComplex load_cx(const std::string& name) {
  return FreeComplex::parse(test::read_corpus(name), NOVIKIT_CORPUS_DIR);
}

std::vector<std::vector<Integer>> mat(std::initializer_list<std::initializer_list<int>> rows) {
  std::vector<std::vector<Integer>> m;
  for (auto r : rows) {
    std::vector<Integer> row;
    for (int v : r) row.push_back(v);
    m.push_back(row);
  }
  return m;
}

}  // namespace

TEST_CASE("klein bottle fox matrix") {
  auto c = load_cx("klein.cx");
  CHECK(c.ranks() == std::vector<std::size_t>{1, 2, 1});
  auto pres = c.presentation();
  CHECK(c.boundary(2).at(0, 0) == RingElement::parse(pres, "b + a^-1"));
  CHECK(c.boundary(2).at(1, 0) == RingElement::parse(pres, "1 - a^-1"));
  CHECK(c.boundary(1).format() == "[[-1 + a, -1 + b]]");
  CHECK(c.euler_characteristic() == 0);
  CHECK(c.manifold_dim() == 2);
}

TEST_CASE("torus fox matrix") {
  auto c = load_cx("torus.cx");
  CHECK(c.boundary(2).format() == "[[1 - b], [-1 + a]]");
}

TEST_CASE("relators must be trivial") {
  auto p = test::load_pc("z2.pc");
  CHECK_THROWS_AS(presentation_complex(p, {p->parse_word("a b")}), Error);
}

TEST_CASE("d squared failures name the entry") {
  const char* bad = "gens: t\ndegree 0 rank 1\ndegree 1 rank 1\ndegree 2 rank 1\nd 1: [[t - 1]]\nd 2: [[1]]\n";
  try {
    FreeComplex::parse(bad);
    FAIL("expected a d-squared error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DSquaredNonzero);
    CHECK(std::string(e.what()).find("(0, 0)") != std::string::npos);
  }
  const char* shape = "gens: t\ndegree 0 rank 1\ndegree 1 rank 2\nd 1: [[t - 1]]\n";
  CHECK_THROWS_AS(FreeComplex::parse(shape), Error);
}

TEST_CASE("koszul complexes") {
  auto c = load_cx("t3.cx");
  CHECK(c.ranks() == std::vector<std::size_t>{1, 3, 3, 1});
  CHECK(c.labels(2) == std::vector<std::string>{"ab", "ac", "bc"});
  CHECK(c.check_d_squared().ok);
  auto s = load_cx("circle.cx");
  CHECK(s.ranks() == std::vector<std::size_t>{1, 1});
  CHECK(s.boundary(1).format() == "[[-1 + t]]");
}

TEST_CASE("sol mapping torus") {
  auto c = mapping_torus(mat({{2, 1}, {1, 1}}));
  CHECK(c.ranks() == std::vector<std::size_t>{1, 3, 3, 1});
  CHECK(c.check_d_squared().ok);
  CHECK(c.euler_characteristic() == 0);
  CHECK(c.labels(1) == std::vector<std::string>{"a", "b", "t"});
  auto again = FreeComplex::parse(c.serialize());
  CHECK(again.serialize() == c.serialize());
  CHECK_THROWS_AS(mapping_torus(mat({{2, 0}, {0, 1}})), Error);
}

TEST_CASE("mapping torus of the identity on the circle is the torus") {
  auto c = mapping_torus(mat({{1}}));
  CHECK(c.ranks() == std::vector<std::size_t>{1, 2, 1});
  CHECK(c.boundary(1).format() == "[[-1 + a, -1 + t]]");
  CHECK(c.boundary(2).format() == "[[1 - t], [-1 + a]]");
}

TEST_CASE("mapping tori of assorted monodromies") {
  for (auto phi : {mat({{-1}}), mat({{0, -1}, {1, 0}}), mat({{1, 1}, {0, 1}}), mat({{1, 0, 1}, {0, 1, 0}, {0, 1, 1}})}) {
    auto c = mapping_torus(phi);
    CHECK(c.check_d_squared().ok);
    CHECK(c.euler_characteristic() == 0);
  }
}

TEST_CASE("product with a sphere") {
  auto s = load_cx("circle.cx");
  auto c = product_with_sphere(s, 2);
  CHECK(c.ranks() == std::vector<std::size_t>{1, 1, 1, 1});
  CHECK(c.check_d_squared().ok);
  CHECK(c.labels(3) == std::vector<std::string>{"txS"});
}

TEST_CASE("fingerprints") {
  auto k = load_cx("klein.cx");
  auto u = Character::parse(k.presentation(), "a=0, b=1");
  CHECK(fingerprint(k, u, 3) == std::vector<std::size_t>{0, 0, 0});
  auto w = load_cx("wedge.cx");
  CHECK(fingerprint(w, Character::parse(w.presentation(), "t=1"), 2) == std::vector<std::size_t>{0, 0, 1});
  auto t = load_cx("torus.cx");
  CHECK(fingerprint(t, Character::parse(t.presentation(), "a=1, b=0"), 5) == std::vector<std::size_t>{0, 0, 0});
  CHECK_THROWS_AS(fingerprint(t, Character::parse(t.presentation(), "a=0, b=0"), 5), Error);
  CHECK_THROWS_AS(fingerprint(t, Character::parse(t.presentation(), "a=1, b=0"), 4), Error);
}

TEST_CASE("novikov base change") {
  auto k = load_cx("klein.cx");
  auto u = Character::parse(k.presentation(), "a=0, b=1");
  auto n = base_change_novikov(k, u, 16);
  CHECK(n.precision() == 16);
  CHECK(n.d_squared_vanishes());
  auto other = test::load_pc("klein.pc");
  CHECK_THROWS_AS(base_change_novikov(k, Character::parse(other, "a=0, b=1"), 16), Error);
}

TEST_CASE("fox fundamental identity on random relators") {
  // sum_j (dr/dx_j)(x_j - 1) = r - 1 in the free group ring, checked in the pc group
  std::mt19937_64 rng(7);
  for (const char* name : {"klein.pc", "z2.pc", "heisenberg.pc", "sol.pc", "dihedral.pc"}) {
    auto p = test::load_pc(name);
    for (int trial = 0; trial < 40; ++trial) {
      Word r = test::random_word(*p, rng, 6);
      RingElement lhs(p);
      for (std::size_t g = 0; g < p->size(); ++g) {
        lhs += fox_derivative(p, r, g) *
               (RingElement::monomial(p, p->generator_power(g)) - RingElement::one(p));
      }
      CHECK(lhs == RingElement::monomial(p, p->collect(r)) - RingElement::one(p));
    }
  }
}
