#include "vnat/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "vnat/errors.hpp"

namespace vnat {

IntegralLattice::IntegralLattice(Matrix basis, Rational scale)
    : basis_(std::move(basis)), scale_(std::move(scale)), dim_(basis_.empty() ? 0 : basis_[0].size()) {
  if (scale_ <= 0) throw std::invalid_argument("IntegralLattice: scale must be positive");
  for (const Word& r : basis_) {
    if (r.size() != dim_) throw std::invalid_argument("IntegralLattice: ragged basis");
  }
}

IntegerMatrix IntegralLattice::gram_units() const {
  const std::size_t n = rank();
  IntegerMatrix g(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      long s = 0;
      for (std::size_t c = 0; c < dim_; ++c) s += basis_[i][c] * basis_[j][c];
      g[i][j] = g[j][i] = s;
    }
  }
  return g;
}

RationalMatrix IntegralLattice::gram() const {
  const IntegerMatrix u = gram_units();
  RationalMatrix g(rank(), std::vector<Rational>(rank()));
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t j = 0; j < rank(); ++j) g[i][j] = Rational(u[i][j]) * scale_;
  return g;
}

namespace {

// Fraction-free Gaussian elimination.
Integer bareiss_determinant(IntegerMatrix a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace

Rational IntegralLattice::determinant() const {
  Rational s = 1;
  for (std::size_t i = 0; i < rank(); ++i) s *= scale_;
  return Rational(bareiss_determinant(gram_units())) * s;
}

bool IntegralLattice::is_integral() const {
  for (const auto& row : gram()) {
    for (const Rational& x : row) {
      if (x.get_den() != 1) return false;
    }
  }
  return true;
}

bool IntegralLattice::is_even() const {
  if (!is_integral()) return false;
  const RationalMatrix g = gram();
  for (std::size_t i = 0; i < rank(); ++i) {
    if (g[i][i].get_num() % 2 != 0) return false;
  }
  return true;
}

Rational IntegralLattice::inner(const Word& a, const Word& b) const {
  Integer s = 0;
  for (std::size_t c = 0; c < dim_; ++c) s += Integer(a[c]) * b[c];
  return Rational(s) * scale_;
}

Word IntegralLattice::ambient(const std::vector<long>& coeffs) const {
  Word v(dim_, 0);
  for (std::size_t i = 0; i < rank(); ++i)
    for (std::size_t c = 0; c < dim_; ++c) v[c] += coeffs[i] * basis_[i][c];
  return v;
}

std::optional<std::vector<Integer>> IntegralLattice::coordinates(const Word& v) const {
  if (v.size() != dim_) return std::nullopt;
  const std::size_t n = rank();
  // Solve a^T basis = v: dim_ equations in n unknowns, exact elimination.
  RationalMatrix m(dim_, std::vector<Rational>(n + 1));
  for (std::size_t c = 0; c < dim_; ++c) {
    for (std::size_t i = 0; i < n; ++i) m[c][i] = basis_[i][c];
    m[c][n] = v[c];
  }
  std::vector<std::size_t> pivot_row_of(n, dim_);
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < dim_; ++col) {
    std::size_t p = row;
    while (p < dim_ && m[p][col] == 0) ++p;
    if (p == dim_) throw std::logic_error("IntegralLattice: basis is not linearly independent");
    std::swap(m[p], m[row]);
    const Rational inv = 1 / m[row][col];
    for (std::size_t j = col; j <= n; ++j) m[row][j] *= inv;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (i == row || m[i][col] == 0) continue;
      const Rational f = m[i][col];
      for (std::size_t j = col; j <= n; ++j) m[i][j] -= f * m[row][j];
    }
    pivot_row_of[col] = row++;
  }
  for (std::size_t i = row; i < dim_; ++i) {
    if (m[i][n] != 0) return std::nullopt;
  }
  std::vector<Integer> out(n);
  for (std::size_t col = 0; col < n; ++col) {
    const Rational& x = m[pivot_row_of[col]][n];
    if (x.get_den() != 1) return std::nullopt;
    out[col] = x.get_num();
  }
  return out;
}

IntegralLattice lattice_from_code(const ZkCode& code, const Rational& scale) {
  const long n_mod = code.modulus();
  const std::size_t n = code.length();
  Matrix basis;
  std::size_t j = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (j < code.gens().size() && code.pivot_columns()[j] == c) {
      Word r = code.gens()[j++];
      for (std::size_t t = c + 1; t < n; ++t) {
        if (2 * r[t] > n_mod) r[t] -= n_mod;  // symmetric lift keeps basis entries small
      }
      basis.push_back(std::move(r));
    } else {
      Word r(n, 0);
      r[c] = n_mod;
      basis.push_back(std::move(r));
    }
  }
  return IntegralLattice(std::move(basis), scale);
}

IntegralLattice construction_a(const ZkCode& c) { return lattice_from_code(c, make_rational(1, c.modulus())); }

IntegralLattice standard_leech(const BinaryCode& golay) {
  if (golay.length() != 24 || golay.dim() != 12) throw FixtureCorrupt("Golay code must have length 24 and dimension 12");
  if (!golay.is_type_ii()) throw FixtureCorrupt("Golay code is not doubly-even self-dual");
  const auto wd = golay.weight_distribution();
  for (std::size_t w = 1; w < 8; ++w) {
    if (wd[w] != 0) throw FixtureCorrupt("Golay code has a nonzero word of weight " + std::to_string(w));
  }
  // In sqrt(8) coordinates the lattice contains 8 Z^24, so it is the preimage of a Z_8 code.
  Matrix gens;
  for (std::uint32_t b : golay.basis()) {
    Word r(24, 0);
    for (std::size_t i = 0; i < 24; ++i) r[i] = (b >> i & 1) ? 2 : 0;
    gens.push_back(std::move(r));
  }
  for (std::size_t i = 1; i < 24; ++i) {
    Word r(24, 0);
    r[0] = 4;
    r[i] = 4;
    gens.push_back(std::move(r));
  }
  Word odd(24, 1);
  odd[0] = 5;  // (-3, 1, ..., 1) mod 8
  gens.push_back(std::move(odd));
  return lattice_from_code(ZkCode(8, 24, std::move(gens)), make_rational(1, 8));
}

std::vector<Integer> smith_diagonal(IntegerMatrix a) {
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<Integer> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      std::size_t pi = rows, pj = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
      if (pi == rows) return diag;
      std::swap(a[t], a[pi]);
      for (auto& r : a) std::swap(r[t], r[pj]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
        clean &= a[i][t] == 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
        clean &= a[t][j] == 0;
      }
      if (!clean) continue;
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      for (std::size_t j = t; j < cols; ++j) a[t][j] += a[bad][j];
    }
    diag.push_back(abs(a[t][t]));
  }
  return diag;
}

SnfResult snf_index(const IntegralLattice& sub, const IntegralLattice& super) {
  if (sub.ambient_dim() != super.ambient_dim()) throw NotSublatticeError("ambient dimensions differ");
  if (sub.scale() != super.scale()) throw NotSublatticeError("lattices use different scales");
  IntegerMatrix x;
  for (std::size_t i = 0; i < sub.rank(); ++i) {
    auto c = super.coordinates(sub.basis()[i]);
    if (!c) throw NotSublatticeError("basis vector " + std::to_string(i) + " of the sublattice is not in the lattice");
    x.push_back(std::move(*c));
  }
  SnfResult r;
  r.diag = smith_diagonal(std::move(x));
  if (r.diag.size() != super.rank()) throw NotSublatticeError("sublattice does not have full rank; index is infinite");
  r.index = 1;
  for (const Integer& d : r.diag) r.index *= d;
  return r;
}

Integer two_quotient_order(const SnfResult& snf) {
  unsigned long odd = 0;
  for (const Integer& d : snf.diag) odd += mpz_odd_p(d.get_mpz_t()) ? 1 : 0;
  return pow2(odd);
}

LeechCertificate certify_leech(const IntegralLattice& l, const EnumOptions& opts) {
  LeechCertificate c;
  c.integral = l.is_integral();
  c.determinant = l.determinant();
  c.even = l.is_even();
  c.unimodular = c.integral && c.determinant == 1;
  if (!c.integral) c.witness = "Gram matrix is not integral";
  else if (!c.even) c.witness = "odd diagonal Gram entry";
  else if (!c.unimodular) c.witness = "determinant " + c.determinant.get_str();
  if (!c.even) return c;
  std::uint64_t roots = 0;
  Word example;
  enumerate_vectors(
      l, 2,
      [&](unsigned, const long* v, long units) {
        if (units == 0) return;
        if (roots++ == 0) example.assign(v, v + l.ambient_dim());
      },
      opts);
  c.rootless = roots == 0;
  if (!c.rootless) {
    std::ostringstream os;
    os << roots << " root pairs, e.g. (";
    for (std::size_t i = 0; i < example.size(); ++i) os << (i ? " " : "") << example[i];
    os << ")";
    c.witness = os.str();
  }
  return c;
}

void verify_frame(const IntegralLattice& l, const Frame& f) {
  if (f.vectors.size() != l.rank()) {
    throw UnverifiedObject("frame has " + std::to_string(f.vectors.size()) + " vectors, expected " +
                           std::to_string(l.rank()));
  }
  const Rational target(2 * f.k);
  for (std::size_t i = 0; i < f.vectors.size(); ++i) {
    if (f.vectors[i].size() != l.ambient_dim()) throw UnverifiedObject("frame vector " + std::to_string(i) + " has wrong length");
    if (!l.contains(f.vectors[i])) throw UnverifiedObject("frame vector " + std::to_string(i) + " is not in the lattice");
    if (l.norm(f.vectors[i]) != target) {
      throw UnverifiedObject("frame vector " + std::to_string(i) + " has norm " + l.norm(f.vectors[i]).get_str());
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (l.inner(f.vectors[i], f.vectors[j]) != 0) {
        throw UnverifiedObject("frame vectors " + std::to_string(j) + " and " + std::to_string(i) + " are not orthogonal");
      }
    }
  }
}

Frame standard_frame(long k, std::size_t n) {
  Frame f;
  f.k = k;
  for (std::size_t i = 0; i < n; ++i) {
    Word v(n, 0);
    v[i] = 2 * k;
    f.vectors.push_back(std::move(v));
  }
  return f;
}

ZkCode frame_to_code(const IntegralLattice& l, const Frame& f) {
  const long n = 2 * f.k;
  Matrix rows;
  for (const Word& b : l.basis()) {
    Word c;
    for (const Word& fv : f.vectors) {
      const Rational ip = l.inner(b, fv);
      if (ip.get_den() != 1) throw std::invalid_argument("frame_to_code: lattice is not integral");
      Integer r;
      mpz_fdiv_r_ui(r.get_mpz_t(), ip.get_num().get_mpz_t(), static_cast<unsigned long>(n));
      c.push_back(r.get_si());
    }
    rows.push_back(std::move(c));
  }
  return ZkCode(n, f.vectors.size(), std::move(rows));
}

IntegralLattice frame_lattice(const IntegralLattice& l, const Frame& f) { return IntegralLattice(f.vectors, l.scale()); }

}  // namespace vnat
