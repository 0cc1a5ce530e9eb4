#pragma once

// Test-only reference arithmetic on plain integer power series. Deliberately
// naive and independent of QSeries.

#include <gmpxx.h>

#include <functional>
#include <vector>

namespace oracle {

using Poly = std::vector<mpz_class>;  // coefficient i of q^i, truncated at size()

inline Poly one(std::size_t n) {
  Poly p(n);
  if (n) p[0] = 1;
  return p;
}

inline Poly mul(const Poly& a, const Poly& b) {
  const std::size_t n = std::min(a.size(), b.size());
  Poly r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline Poly power(const Poly& a, int e) {
  Poly r = one(a.size());
  for (int i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

/// prod_{n>=1} (1 - q^{step n}) by multiplying out the factors one at a time.
inline Poly euler_product(std::size_t n, std::size_t step = 1) {
  Poly r = one(n);
  for (std::size_t m = step; m < n; m += step) {
    Poly f = one(n);
    f[m] = -1;
    r = mul(r, f);
  }
  return r;
}

/// Power series inverse for a series with constant term +-1.
inline Poly inverse(const Poly& a) {
  Poly r(a.size());
  r[0] = a[0];
  for (std::size_t m = 1; m < a.size(); ++m) {
    mpz_class acc = 0;
    for (std::size_t j = 1; j <= m; ++j) acc += a[j] * r[m - j];
    r[m] = -a[0] * acc;
  }
  return r;
}

/// Number of partitions of n by direct recursive enumeration of parts.
inline long count_partitions(long n, long max_part) {
  if (n == 0) return 1;
  long total = 0;
  for (long p = std::min(n, max_part); p >= 1; --p) total += count_partitions(n - p, p);
  return total;
}

inline mpz_class sigma3(long n) {
  mpz_class s = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) s += mpz_class(d) * d * d;
  return s;
}

}  // namespace oracle
