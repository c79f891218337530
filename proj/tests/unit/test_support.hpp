#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "novikit/groupring.hpp"
#include "novikit/novikov.hpp"
#include "novikit/pcgroup.hpp"

#ifndef NOVIKIT_CORPUS_DIR
#define NOVIKIT_CORPUS_DIR "corpus"
#endif

namespace novikit::test {

inline std::string corpus_path(const std::string& name) { return std::string(NOVIKIT_CORPUS_DIR) + "/" + name; }

inline std::string read_corpus(const std::string& name) {
  std::ifstream in(corpus_path(name));
  if (!in) throw std::runtime_error("missing corpus file " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline PresentationPtr load_pc(const std::string& name) { return PcPresentation::parse(read_corpus(name)); }

// Random word with up to max_len letters and exponents in [-3, 3].
inline Word random_word(const PcPresentation& p, std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> gen(0, p.size() - 1);
  std::uniform_int_distribution<int> exp(-3, 3);
  Word w;
  for (int n = len(rng); n > 0; --n) w.push_back({gen(rng), exp(rng)});
  return w;
}

inline NormalForm random_element_of_group(const PresentationPtr& p, std::mt19937_64& rng, int max_len) {
  return p->collect(random_word(*p, rng, max_len));
}

// Up to `max_terms` terms with coefficients in [-3, 3].
inline RingElement random_element(const PresentationPtr& p, std::mt19937_64& rng, int max_terms, int word_len) {
  std::uniform_int_distribution<int> count(0, max_terms);
  std::uniform_int_distribution<int> coeff(-3, 3);
  RingElement x(p);
  for (int n = count(rng); n > 0; --n) x.add_term(random_element_of_group(p, rng, word_len), coeff(rng));
  return x;
}

// Random group element of height in [lo, hi] under u, built by fixing up a
// random element with a generator of nonzero height.
inline NormalForm random_at_height(const PresentationPtr& p, const Character& u, std::mt19937_64& rng,
                                   std::int64_t lo, std::int64_t hi, int fiber_len = 2) {
  std::size_t lift = p->size();
  for (std::size_t g = 0; g < p->size(); ++g) {
    if (u.values()[g] == 1 || u.values()[g] == -1) {
      lift = g;
      break;
    }
  }
  if (lift == p->size()) throw std::runtime_error("character has no generator of height +-1");
  std::uniform_int_distribution<std::int64_t> target(lo, hi);
  NormalForm x = random_element_of_group(p, rng, fiber_len);
  std::int64_t need = target(rng) - u.height(x);
  return p->multiply(x, p->generator_power(lift, Integer(need * u.values()[lift])));
}

inline RingElement random_positive_element(const PresentationPtr& p, const Character& u, std::mt19937_64& rng,
                                           int max_terms) {
  std::uniform_int_distribution<int> count(1, max_terms);
  std::uniform_int_distribution<int> coeff(-3, 3);
  RingElement x(p);
  for (int n = count(rng); n > 0; --n) x.add_term(random_at_height(p, u, rng, 1, 4), coeff(rng));
  return x;
}

// +-g (1 + noise) with u-positive noise of at most four terms.
inline RingElement random_unit(const PresentationPtr& p, const Character& u, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> sign(0, 1);
  NormalForm g = random_at_height(p, u, rng, -3, 3);
  RingElement lead = RingElement::monomial(p, g, sign(rng) ? 1 : -1);
  std::uniform_int_distribution<int> count(0, 4);
  std::uniform_int_distribution<int> coeff(-3, 3);
  RingElement noise = RingElement::one(p);
  for (int n = count(rng); n > 0; --n) noise.add_term(random_at_height(p, u, rng, 1, 4), coeff(rng));
  return lead * noise;
}

}  // namespace novikit::test
