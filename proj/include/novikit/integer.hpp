#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace novikit {

using Integer = mpz_class;

inline std::string to_string(const Integer& x) { return x.get_str(); }

// Throws InvalidArgument when x does not fit.
std::int64_t to_int64(const Integer& x, const char* what);

inline Integer from_int64(std::int64_t v) {
  Integer r;
  mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
  return r;
}

// Floor division with non-negative remainder for positive modulus.
inline void floor_divmod(const Integer& a, const Integer& m, Integer& q, Integer& r) {
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
}

}  // namespace novikit
