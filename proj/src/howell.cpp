#include <numeric>
#include <stdexcept>

#include "vnat/zkcode.hpp"

namespace vnat {
namespace {

// g = s a + t b with g = gcd(a, b) >= 0.
long ext_gcd(long a, long b, long& s, long& t) {
  long s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (b != 0) {
    const long q = a / b;
    long r = a - q * b;
    a = b;
    b = r;
    r = s0 - q * s1; s0 = s1; s1 = r;
    r = t0 - q * t1; t0 = t1; t1 = r;
  }
  if (a < 0) { a = -a; s0 = -s0; t0 = -t0; }
  s = s0;
  t = t0;
  return a;
}

// A unit w of Z_n with w * a == gcd(a, n) (mod n).
long normalizing_unit(long a, long n) {
  const long g = std::gcd(a, n);
  const long np = n / g;
  long s, t;
  ext_gcd((a / g) % np, np, s, t);
  long w = mod(s, np);
  if (np == 1) w = 0;
  for (long j = 0;; ++j) {
    const long cand = mod(w + j * np, n);
    if (std::gcd(cand, n) == 1) return cand;
  }
}

void reduce_row(Word& r, long n) {
  for (long& x : r) x = mod(x, n);
}

}  // namespace

Matrix howell_form(long n, std::size_t length, Matrix a) {
  if (n < 2) throw std::invalid_argument("howell_form: modulus must be >= 2");
  for (auto& r : a) {
    if (r.size() != length) throw std::invalid_argument("howell_form: ragged rows");
    reduce_row(r, n);
  }
  std::size_t top = 0;
  for (std::size_t c = 0; c < length; ++c) {
    if (top == a.size()) break;
    for (std::size_t i = top + 1; i < a.size(); ++i) {
      if (a[i][c] == 0) continue;
      long s, t;
      const long g = ext_gcd(a[top][c], a[i][c], s, t);
      const long u = -a[i][c] / g, v = a[top][c] / g;
      for (std::size_t j = c; j < length; ++j) {
        const long x = a[top][j], y = a[i][j];
        a[top][j] = mod(s * x + t * y, n);
        a[i][j] = mod(u * x + v * y, n);
      }
    }
    if (a[top][c] == 0) continue;
    const long w = normalizing_unit(a[top][c], n);
    for (std::size_t j = c; j < length; ++j) a[top][j] = mod(a[top][j] * w, n);
    const long p = a[top][c];
    if (p != 1) {
      Word ann(length, 0);
      bool nonzero = false;
      for (std::size_t j = c + 1; j < length; ++j) {
        ann[j] = mod(a[top][j] * (n / p), n);
        nonzero |= ann[j] != 0;
      }
      if (nonzero) a.push_back(std::move(ann));
    }
    for (std::size_t i = 0; i < top; ++i) {
      const long q = a[i][c] / p;  // floor, entries are non-negative
      if (q == 0) continue;
      for (std::size_t j = c; j < length; ++j) a[i][j] = mod(a[i][j] - q * a[top][j], n);
    }
    ++top;
  }
  a.resize(top);
  return a;
}

}  // namespace vnat
