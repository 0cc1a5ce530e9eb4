#include "vnat/zkcode.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace vnat {

ZkCode::ZkCode(long modulus, std::size_t length, Matrix rows)
    : modulus_(modulus), length_(length) {
  if (modulus < 2 || modulus % 2 != 0) throw std::invalid_argument("ZkCode: modulus must be even and >= 2");
  gens_ = howell_form(modulus, length, std::move(rows));
  for (const Word& g : gens_) {
    std::size_t c = 0;
    while (g[c] == 0) ++c;
    pivot_cols_.push_back(c);
    orders_.push_back(modulus / g[c]);
  }
}

Integer ZkCode::card() const {
  Integer r = 1;
  for (long o : orders_) r *= o;
  return r;
}

bool ZkCode::contains(Word w) const {
  if (w.size() != length_) return false;
  for (long& x : w) x = mod(x, modulus_);
  for (std::size_t j = 0; j < gens_.size(); ++j) {
    const long p = gens_[j][pivot_cols_[j]];
    const long x = w[pivot_cols_[j]];
    if (x % p != 0) return false;
    const long q = x / p;
    for (std::size_t c = pivot_cols_[j]; c < length_; ++c) w[c] = mod(w[c] - q * gens_[j][c], modulus_);
  }
  for (long x : w) {
    if (x != 0) return false;
  }
  return true;
}

Word ZkCode::combine(const std::vector<long>& coeffs) const {
  Word w(length_, 0);
  for (std::size_t j = 0; j < gens_.size() && j < coeffs.size(); ++j) {
    for (std::size_t c = 0; c < length_; ++c) w[c] = mod(w[c] + coeffs[j] * gens_[j][c], modulus_);
  }
  return w;
}

void ZkCode::for_each_codeword(const std::function<void(const Word&)>& f) const {
  std::vector<long> u(gens_.size(), 0);
  while (true) {
    f(combine(u));
    std::size_t j = 0;
    while (j < u.size() && ++u[j] == orders_[j]) u[j++] = 0;
    if (j == u.size()) return;
  }
}

nlohmann::json ZkCode::to_json() const {
  return {{"length", length_}, {"modulus", modulus_}, {"generators", gens_}, {"card", card().get_str()}};
}

ZkCode dual(const ZkCode& c) {
  const std::size_t n = c.length(), m = c.gens().size();
  Matrix aug(n, Word(m + n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) aug[i][j] = c.gens()[j][i];
    aug[i][m + i] = 1;
  }
  Matrix h = howell_form(c.modulus(), m + n, std::move(aug));
  Matrix kernel;
  for (const Word& r : h) {
    bool zero_prefix = true;
    for (std::size_t j = 0; j < m; ++j) zero_prefix &= r[j] == 0;
    if (zero_prefix) kernel.emplace_back(r.begin() + static_cast<long>(m), r.end());
  }
  return ZkCode(c.modulus(), n, std::move(kernel));
}

long inner_product(const Word& x, const Word& y, long modulus) {
  long s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s = mod(s + x[i] * y[i], modulus);
  return s;
}

long euclidean_weight(const Word& c, long modulus) {
  long w = 0;
  for (long x : c) {
    const long t = residue_type(x, modulus);
    w += t * t;
  }
  return w;
}

TypeIIReport verify_type_ii(const ZkCode& c) {
  TypeIIReport r;
  const auto& g = c.gens();
  const long n = c.modulus();
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i; j < g.size(); ++j) {
      const long ip = inner_product(g[i], g[j], n);
      if (ip != 0) {
        std::ostringstream os;
        os << "<g" << i << ", g" << j << "> = " << ip << " mod " << n;
        r.witness = os.str();
        return r;
      }
    }
  }
  r.self_orthogonal = true;
  const Integer full = ipow(Integer(n), c.length());
  if (c.card() * c.card() != full) {
    r.witness = "|C|^2 = " + Integer(c.card() * c.card()).get_str() + " != " + full.get_str();
    return r;
  }
  r.self_dual = true;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const long w = euclidean_weight(g[i], n);
    if (w % (2 * n) != 0) {
      std::ostringstream os;
      os << "Ewt(g" << i << ") = " << w << ", not divisible by " << 2 * n;
      r.witness = os.str();
      return r;
    }
  }
  r.type_ii = true;
  return r;
}

BinaryCode::BinaryCode(std::size_t length, std::vector<std::uint32_t> rows) : length_(length) {
  if (length > 32) throw std::invalid_argument("BinaryCode: length must be <= 32");
  const std::uint32_t mask = all_ones();
  // Reduced row echelon form with pivots at the lowest set bit.
  for (std::uint32_t r : rows) {
    r &= mask;
    for (std::uint32_t b : basis_) {
      if (r & (b & -b)) r ^= b;
    }
    if (r == 0) continue;
    const std::uint32_t lead = r & -r;
    for (std::uint32_t& b : basis_) {
      if (b & lead) b ^= r;
    }
    basis_.push_back(r);
  }
  std::sort(basis_.begin(), basis_.end(), [](std::uint32_t a, std::uint32_t b) { return (a & -a) < (b & -b); });
}

bool BinaryCode::contains(std::uint32_t w) const {
  for (std::uint32_t b : basis_) {
    if (w & (b & -b)) w ^= b;
  }
  return w == 0;
}

BinaryCode BinaryCode::dual() const {
  std::uint32_t pivots = 0;
  for (std::uint32_t b : basis_) pivots |= b & -b;
  std::vector<std::uint32_t> rows;
  for (std::size_t f = 0; f < length_; ++f) {
    const std::uint32_t bit = 1u << f;
    if (pivots & bit) continue;
    // Free coordinate f: set it, and each pivot coordinate to that row's bit f.
    std::uint32_t v = bit;
    for (std::uint32_t b : basis_) {
      if (b & bit) v |= b & -b;
    }
    rows.push_back(v);
  }
  return BinaryCode(length_, rows);
}

std::vector<std::uint32_t> BinaryCode::codewords() const {
  std::vector<std::uint32_t> out{0};
  out.reserve(std::size_t{1} << dim());
  for (std::uint32_t b : basis_) {
    const std::size_t sz = out.size();
    for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] ^ b);
  }
  return out;
}

std::vector<std::uint64_t> BinaryCode::weight_distribution() const {
  std::vector<std::uint64_t> d(length_ + 1, 0);
  for (std::uint32_t w : codewords()) ++d[static_cast<std::size_t>(std::popcount(w))];
  return d;
}

bool BinaryCode::is_self_orthogonal() const {
  for (std::uint32_t a : basis_) {
    for (std::uint32_t b : basis_) {
      if (std::popcount(a & b) % 2 != 0) return false;
    }
  }
  return true;
}

bool BinaryCode::is_doubly_even() const {
  if (!is_self_orthogonal()) return false;
  for (std::uint32_t b : basis_) {
    if (std::popcount(b) % 4 != 0) return false;
  }
  return true;
}

C2Analysis c2_analysis(const ZkCode& c) {
  const std::size_t n = c.length(), m = c.gens().size();
  const long k = c.k();
  // Rows (g, g) and (k e_i, 0): the span's vectors with zero first half are (0, x), x in C with x = 0 mod k.
  Matrix aug;
  for (const Word& g : c.gens()) {
    Word r(g);
    r.insert(r.end(), g.begin(), g.end());
    aug.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < n; ++i) {
    Word r(2 * n, 0);
    r[i] = k;
    aug.push_back(std::move(r));
  }
  (void)m;
  Matrix h = howell_form(c.modulus(), 2 * n, std::move(aug));
  Matrix sub;
  for (const Word& r : h) {
    bool zero_prefix = true;
    for (std::size_t j = 0; j < n; ++j) zero_prefix &= r[j] == 0;
    if (zero_prefix) sub.emplace_back(r.begin() + static_cast<long>(n), r.end());
  }
  ZkCode c2(c.modulus(), n, sub);
  std::vector<std::uint32_t> bits;
  for (const Word& g : c2.gens()) {
    std::uint32_t b = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (g[i] == k) b |= 1u << i;
    }
    bits.push_back(b);
  }
  BinaryCode bin(n, bits);
  BinaryCode bdual = bin.dual();
  C2Analysis out{c2, bin, bin.dim(), bdual, false, false};
  out.contains_all_ones = bin.contains(bin.all_ones());
  out.binary_type_ii = bin.is_type_ii();
  if (Integer(pow2(out.m)) != c2.card()) {
    throw std::logic_error("c2_analysis: C2 is not elementary abelian of order 2^m");
  }
  return out;
}

Composition composition_of(const Word& c, long modulus) {
  Composition comp(static_cast<std::size_t>(modulus / 2 + 1), 0);
  for (long x : c) ++comp[static_cast<std::size_t>(residue_type(x, modulus))];
  return comp;
}

long composition_weight(const Composition& comp) {
  long w = 0;
  for (std::size_t t = 0; t < comp.size(); ++t) w += comp[t] * static_cast<long>(t * t);
  return w;
}

Integer SweHistogram::total() const {
  Integer s = 0;
  for (const auto& [comp, n] : counts) s += Integer(std::to_string(n));
  return s;
}

std::optional<long> SweHistogram::min_nonzero_weight() const {
  std::optional<long> best;
  for (const auto& [comp, n] : counts) {
    if (n == 0 || static_cast<std::size_t>(comp[0]) == length) continue;
    const long w = composition_weight(comp);
    if (!best || w < *best) best = w;
  }
  return best;
}

std::map<Composition, std::int64_t> SweHistogram::signed_counts(std::size_t i) const {
  if (!tracks_parity) throw std::logic_error("signed_counts: histogram was built without parity tracking");
  std::map<Composition, std::int64_t> out;
  for (const auto& [comp, n] : counts) {
    const auto it = odd.find(comp);
    const std::uint64_t o = it == odd.end() ? 0 : it->second[i];
    out[comp] = static_cast<std::int64_t>(n) - 2 * static_cast<std::int64_t>(o);
  }
  return out;
}

SweHistogram& SweHistogram::merge(const SweHistogram& other) {
  if (counts.empty() && odd.empty()) {
    k = other.k;
    length = other.length;
    tracks_parity = other.tracks_parity;
  }
  if (k != other.k || length != other.length || tracks_parity != other.tracks_parity) {
    throw std::invalid_argument("SweHistogram::merge: incompatible histograms");
  }
  for (const auto& [comp, n] : other.counts) counts[comp] += n;
  for (const auto& [comp, v] : other.odd) {
    auto& dst = odd[comp];
    dst.resize(length, 0);
    for (std::size_t i = 0; i < length; ++i) dst[i] += v[i];
  }
  return *this;
}

nlohmann::json SweHistogram::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [comp, n] : counts) {
    nlohmann::json r{{"composition", comp}, {"count", std::to_string(n)}};
    if (tracks_parity) {
      std::vector<std::string> o;
      for (auto v : odd.at(comp)) o.push_back(std::to_string(v));
      r["odd"] = o;
    }
    rows.push_back(std::move(r));
  }
  return {{"k", k}, {"length", length}, {"total", total().get_str()}, {"classes", rows}};
}

}  // namespace vnat
