#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <string>

namespace vnat {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Integer& z) { return z.get_str(); }
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parses "a" or "a/b"; throws ParseError on malformed input.
Rational parse_rational(const std::string& text);

inline Integer pow2(unsigned long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

inline Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// Non-negative residue of a modulo m (m > 0).
constexpr long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

constexpr long lcm(long a, long b) { return std::lcm(a, b); }

Integer from_int128(__int128 v);

}  // namespace vnat
