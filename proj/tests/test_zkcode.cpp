#include <doctest.h>

#include <bit>
#include <numeric>
#include <random>
#include <set>

#include "vnat/errors.hpp"
#include "vnat/zkcode.hpp"

using namespace vnat;

namespace {

// Additive closure of the generators: the row span, computed without any echelon logic.
std::set<Word> brute_span(long n, std::size_t len, const Matrix& rows) {
  std::set<Word> seen{Word(len, 0)};
  std::vector<Word> frontier{Word(len, 0)};
  while (!frontier.empty()) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (const Word& r : rows) {
        Word s(len);
        for (std::size_t i = 0; i < len; ++i) s[i] = mod(w[i] + r[i], n);
        if (seen.insert(s).second) next.push_back(std::move(s));
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

std::set<Word> code_set(const ZkCode& c) {
  std::set<Word> s;
  c.for_each_codeword([&](const Word& w) { s.insert(w); });
  return s;
}

// Every vector of Z_n^len, for small len.
template <class F>
void for_each_vector(long n, std::size_t len, F f) {
  Word v(len, 0);
  while (true) {
    f(v);
    std::size_t i = 0;
    while (i < len && ++v[i] == n) v[i++] = 0;
    if (i == len) return;
  }
}

Matrix random_rows(std::mt19937_64& rng, long n, std::size_t len, std::size_t count) {
  std::uniform_int_distribution<long> d(0, n - 1);
  Matrix rows(count, Word(len));
  for (auto& r : rows)
    for (auto& x : r) x = d(rng);
  return rows;
}

// A random row operation sequence preserving the span.
Matrix scramble(std::mt19937_64& rng, long n, Matrix rows) {
  std::uniform_int_distribution<long> d(0, n - 1);
  std::vector<long> units;
  for (long u = 1; u < n; ++u)
    if (std::gcd(u, n) == 1) units.push_back(u);
  std::uniform_int_distribution<std::size_t> pick_u(0, units.size() - 1);
  for (int step = 0; step < 30 && rows.size() > 1; ++step) {
    std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
    const std::size_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    const long c = d(rng);
    for (std::size_t i = 0; i < rows[a].size(); ++i) rows[a][i] = mod(rows[a][i] + c * rows[b][i], n);
    const long u = units[pick_u(rng)];
    for (auto& x : rows[b]) x = mod(x * u, n);
  }
  std::shuffle(rows.begin(), rows.end(), rng);
  rows.push_back(Word(rows.empty() ? 0 : rows[0].size(), 0));  // a redundant zero row
  return rows;
}

ZkCode z4_repeat4() { return ZkCode(4, 4, {{1, 1, 1, 1}}); }

}  // namespace

TEST_CASE("howell form basics") {
  const ZkCode id(4, 2, {{1, 0}, {0, 1}});
  CHECK(id.gens() == Matrix{{1, 0}, {0, 1}});
  CHECK(id.card() == 16);
  const ZkCode two(4, 1, {{2}});
  CHECK(two.gens() == Matrix{{2}});
  CHECK(two.card() == 2);
  const ZkCode zero(6, 3, {});
  CHECK(zero.card() == 1);
  CHECK(zero.gens().empty());
  // Row (2, 1) over Z_4 also generates (0, 2): the Howell form has to show it.
  const ZkCode hidden(4, 2, {{2, 1}});
  CHECK(hidden.gens() == Matrix{{2, 1}, {0, 2}});
  CHECK(hidden.card() == 4);
}

TEST_CASE("howell canonicity against brute-force spans") {
  std::mt19937_64 rng(7);
  for (long n : {4L, 6L, 8L, 12L}) {
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t len = 1 + rng() % (n == 12 ? 4 : 6);
      const std::size_t count = 1 + rng() % 4;
      const Matrix rows = random_rows(rng, n, len, count);
      const ZkCode a(n, len, rows);
      const ZkCode b(n, len, scramble(rng, n, rows));
      CHECK(a == b);
      const auto span = brute_span(n, len, rows);
      CHECK(Integer(static_cast<unsigned long>(span.size())) == a.card());
      CHECK(code_set(a) == span);
      // idempotent
      CHECK(ZkCode(n, len, a.gens()) == a);
      for (const Word& w : span) CHECK(a.contains(w));
    }
  }
}

TEST_CASE("howell canonicity at length 8") {
  std::mt19937_64 rng(11);
  for (long n : {4L, 6L}) {
    for (int trial = 0; trial < 6; ++trial) {
      const Matrix rows = random_rows(rng, n, 8, 2);
      const ZkCode a(n, 8, rows);
      CHECK(a == ZkCode(n, 8, scramble(rng, n, rows)));
      CHECK(code_set(a) == brute_span(n, 8, rows));
    }
  }
}

TEST_CASE("membership rejects non-codewords") {
  const ZkCode c = z4_repeat4();
  CHECK(c.contains({3, 3, 3, 3}));
  CHECK(c.contains({2, 2, 2, 2}));
  CHECK_FALSE(c.contains({1, 1, 1, 3}));
  CHECK_FALSE(c.contains({1, 1, 1}));
}

TEST_CASE("dual against brute force") {
  const ZkCode c = z4_repeat4();
  CHECK(c.card() == 4);
  const ZkCode d = dual(c);
  long count = 0;
  for_each_vector(4, 4, [&](const Word& v) {
    const bool orth = inner_product(v, {1, 1, 1, 1}, 4) == 0;
    count += orth;
    CHECK(d.contains(v) == orth);
  });
  CHECK(count == 64);
  CHECK(d.card() == 64);
  CHECK(dual(ZkCode(4, 3, {})).card() == 64);
}

TEST_CASE("dual is an involution and cardinalities multiply to N^n") {
  std::mt19937_64 rng(3);
  for (long n : {4L, 6L, 8L, 12L}) {
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t len = 1 + rng() % 7;
      const ZkCode c(n, len, random_rows(rng, n, len, 1 + rng() % 3));
      const ZkCode d = dual(c);
      CHECK(c.card() * d.card() == ipow(Integer(n), len));
      CHECK(dual(d) == c);
      for (const Word& g : d.gens())
        for (const Word& h : c.gens()) CHECK(inner_product(g, h, n) == 0);
    }
  }
}

TEST_CASE("euclidean weight") {
  CHECK(euclidean_weight(Word(24, 1), 4) == 24);
  CHECK(euclidean_weight({3}, 4) == 1);
  CHECK(euclidean_weight({2}, 4) == 4);
  CHECK(euclidean_weight({3}, 6) == 9);
  CHECK(euclidean_weight({4}, 6) == 4);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    Word w(6), neg(6);
    for (std::size_t i = 0; i < 6; ++i) {
      w[i] = static_cast<long>(rng() % 8);
      neg[i] = mod(-w[i], 8);
    }
    CHECK(euclidean_weight(w, 8) == euclidean_weight(neg, 8));
  }
}

namespace {

// Type II verdict from all codewords.
bool type_ii_by_enumeration(const ZkCode& c) {
  if (!(c.card() * c.card() == ipow(Integer(c.modulus()), c.length()))) return false;
  bool ok = true;
  c.for_each_codeword([&](const Word& x) {
    ok &= euclidean_weight(x, c.modulus()) % (2 * c.modulus()) == 0;
    for (const Word& g : c.gens()) ok &= inner_product(x, g, c.modulus()) == 0;
  });
  return ok;
}

}  // namespace

TEST_CASE("type II verdict on small examples") {
  const ZkCode bad(4, 4, {{1, 1, 1, 1}, {0, 2, 0, 2}, {0, 0, 2, 2}});
  const auto r = verify_type_ii(bad);
  CHECK(r.self_orthogonal);
  CHECK(r.self_dual);
  CHECK_FALSE(r.type_ii);
  CHECK(r.witness.find("Ewt") != std::string::npos);
  CHECK_FALSE(type_ii_by_enumeration(bad));

  // Octacode-style length-8 Type II code over Z_4: the lift of the extended Hamming code.
  const ZkCode octa(4, 8,
                    {{1, 0, 0, 0, 3, 1, 2, 1}, {0, 1, 0, 0, 1, 2, 3, 1}, {0, 0, 1, 0, 3, 3, 3, 2}, {0, 0, 0, 1, 2, 3, 1, 1}});
  const auto o = verify_type_ii(octa);
  CHECK(o.self_dual);
  CHECK(o.type_ii);
  CHECK(type_ii_by_enumeration(octa));
  CHECK(dual(octa) == octa);

  const auto nso = verify_type_ii(ZkCode(4, 2, {{1, 0}}));
  CHECK_FALSE(nso.self_orthogonal);
  CHECK_FALSE(nso.witness.empty());
}

namespace {

Matrix direct_sum(const ZkCode& a, const ZkCode& b) {
  Matrix rows;
  for (const Word& g : a.gens()) {
    Word r(g);
    r.resize(a.length() + b.length(), 0);
    rows.push_back(r);
  }
  for (const Word& g : b.gens()) {
    Word r(a.length(), 0);
    r.insert(r.end(), g.begin(), g.end());
    rows.push_back(r);
  }
  return rows;
}

// Coordinate permutation and negation: preserves self-duality and Euclidean weights.
ZkCode monomial_image(std::mt19937_64& rng, const ZkCode& c) {
  std::vector<std::size_t> perm(c.length());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<long> sign(c.length());
  for (auto& s : sign) s = (rng() & 1) ? 1 : -1;
  Matrix rows;
  for (const Word& g : c.gens()) {
    Word r(c.length());
    for (std::size_t i = 0; i < c.length(); ++i) r[perm[i]] = mod(sign[i] * g[i], c.modulus());
    rows.push_back(r);
  }
  return ZkCode(c.modulus(), c.length(), rows);
}

}  // namespace

TEST_CASE("generator Type II verdict matches full enumeration") {
  const ZkCode octa(4, 8,
                    {{1, 0, 0, 0, 3, 1, 2, 1}, {0, 1, 0, 0, 1, 2, 3, 1}, {0, 0, 1, 0, 3, 3, 3, 2}, {0, 0, 0, 1, 2, 3, 1, 1}});
  const ZkCode bad4(4, 4, {{1, 1, 1, 1}, {0, 2, 0, 2}, {0, 0, 2, 2}});
  const ZkCode twos(4, 2, {{2, 0}, {0, 2}});
  // Z_6 = Z_2 x Z_3: 3 * (binary self-dual rows) + 4 * (tetracode rows).
  const ZkCode z6(6, 4, {{3, 3, 0, 0}, {0, 0, 3, 3}, {4, 4, 4, 0}, {0, 4, 2, 4}});
  const ZkCode z8(8, 2, {{2, 2}, {0, 4}});
  std::vector<ZkCode> pool{octa, bad4, twos, z6, z8,
                           ZkCode(4, 12, direct_sum(octa, bad4)),
                           ZkCode(4, 16, direct_sum(octa, octa)),
                           ZkCode(6, 8, direct_sum(z6, z6)),
                           ZkCode(8, 4, direct_sum(z8, z8))};
  CHECK(verify_type_ii(z6).self_dual);
  std::mt19937_64 rng(19);
  int type_ii = 0, self_dual_only = 0, not_self_dual = 0;
  for (const ZkCode& base : pool) {
    for (int t = 0; t < 4; ++t) {
      const ZkCode c = t == 0 ? base : monomial_image(rng, base);
      const auto r = verify_type_ii(c);
      CHECK(r.type_ii == type_ii_by_enumeration(c));
      type_ii += r.type_ii;
      self_dual_only += r.self_dual && !r.type_ii;
    }
  }
  for (long n : {4L, 6L, 8L}) {
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t len = 2 + rng() % 5;
      const ZkCode c(n, len, random_rows(rng, n, len, 1 + rng() % 3));
      const auto r = verify_type_ii(c);
      CHECK(r.type_ii == type_ii_by_enumeration(c));
      not_self_dual += !r.self_dual;
    }
  }
  CHECK(type_ii >= 8);
  CHECK(self_dual_only >= 8);
  CHECK(not_self_dual > 0);
}

namespace {

SweHistogram naive_swe(const ZkCode& c) {
  SweHistogram h;
  h.k = c.k();
  h.length = c.length();
  h.tracks_parity = true;
  c.for_each_codeword([&](const Word& w) {
    const Composition comp = composition_of(w, c.modulus());
    ++h.counts[comp];
    auto& o = h.odd[comp];
    o.resize(c.length(), 0);
    for (std::size_t i = 0; i < c.length(); ++i) o[i] += w[i] % 2;
  });
  return h;
}

const ZkCode& octacode() {
  static const ZkCode c(4, 8,
                        {{1, 0, 0, 0, 3, 1, 2, 1}, {0, 1, 0, 0, 1, 2, 3, 1}, {0, 0, 1, 0, 3, 3, 3, 2}, {0, 0, 0, 1, 2, 3, 1, 1}});
  return c;
}

}  // namespace

TEST_CASE("streamed swe matches per-codeword enumeration") {
  std::mt19937_64 rng(23);
  std::vector<ZkCode> codes{octacode(), ZkCode(4, 16, direct_sum(octacode(), octacode())), ZkCode(6, 3, {})};
  for (long n : {4L, 6L, 8L, 12L}) {
    for (int t = 0; t < 5; ++t) {
      const std::size_t len = 3 + rng() % 6;
      codes.emplace_back(n, len, random_rows(rng, n, len, 1 + rng() % 3));
    }
  }
  for (const ZkCode& c : codes) {
    const SweHistogram ref = naive_swe(c);
    SweOptions opts;
    opts.track_parity = true;
    const SweHistogram h = enumerate_swe(c, opts);
    CHECK(h == ref);
    CHECK(h.total() == c.card());
    opts.track_parity = false;
    const SweHistogram plain = enumerate_swe(c, opts);
    CHECK(plain.counts == ref.counts);
    CHECK_THROWS_AS((void)plain.signed_counts(0), std::logic_error);
    // signed histograms split the unsigned one
    for (std::size_t i = 0; i < c.length(); ++i) {
      for (const auto& [comp, s] : h.signed_counts(i)) {
        const auto n = static_cast<std::int64_t>(h.counts.at(comp));
        CHECK((n + s) % 2 == 0);
        CHECK(s <= n);
        CHECK(s >= -n);
      }
    }
  }
}

TEST_CASE("swe with many parity hits per class flushes byte counters correctly") {
  // 4^8 codewords of Z_4^8 fall into 45 classes, several far above 255.
  Matrix id(8, Word(8, 0));
  for (std::size_t i = 0; i < 8; ++i) id[i][i] = 1;
  const ZkCode full(4, 8, id);
  SweOptions opts;
  opts.track_parity = true;
  CHECK(enumerate_swe(full, opts) == naive_swe(full));
}

TEST_CASE("partitioned enumeration merges to a single pass") {
  const ZkCode c(4, 16, direct_sum(octacode(), octacode()));
  SweOptions opts;
  opts.track_parity = true;
  const SweHistogram whole = enumerate_swe_slices(c, 0, 0, 1, opts);
  for (std::size_t depth : {1u, 2u, 3u}) {
    const std::uint64_t slices = swe_slice_count(c, depth);
    SweHistogram merged;
    for (std::uint64_t b = 0; b < slices; b += 3) merged.merge(enumerate_swe_slices(c, depth, b, b + 3, opts));
    CHECK(merged == whole);
  }
  opts.workers = 3;
  CHECK(enumerate_swe(c, opts) == whole);
}

TEST_CASE("swe evaluation and minimum weight") {
  const SweHistogram h = enumerate_swe(octacode());
  CHECK(h.total() == 256);
  CHECK(h.min_nonzero_weight() == 8);
  // Octacode: the all-ones-type words have composition (0, 8, 0).
  CHECK(h.counts.at(Composition{0, 8, 0}) == 16);
  CHECK(h.counts.at(Composition{8, 0, 0}) == 1);
  CHECK(enumerate_swe(ZkCode(4, 4, {})).min_nonzero_weight() == std::nullopt);
}

TEST_CASE("swe budget exhaustion reports progress") {
  Matrix id(12, Word(12, 0));
  for (std::size_t i = 0; i < 12; ++i) id[i][i] = 1;
  const ZkCode big(12, 12, id);  // 12^12 words: far beyond a zero budget
  SweOptions opts;
  opts.budget = Budget(std::chrono::milliseconds(0));
  try {
    (void)enumerate_swe(big, opts);
    FAIL("expected BudgetExceeded");
  } catch (const BudgetExceeded& e) {
    CHECK(e.progress().find("enumerated") != std::string::npos);
  }
}

TEST_CASE("C2 analysis against brute force") {
  const C2Analysis a = c2_analysis(octacode());
  std::set<std::uint32_t> c2;
  octacode().for_each_codeword([&](const Word& w) {
    std::uint32_t b = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] % 2 != 0) return;
      if (w[i] == 2) b |= 1u << i;
    }
    c2.insert(b);
  });
  CHECK((std::size_t{1} << a.m) == c2.size());
  for (std::uint32_t b : c2) CHECK(a.binary.contains(b));
  CHECK(a.contains_all_ones);
  CHECK(a.m >= 4);
  CHECK(a.binary_dual.dim() == 8 - a.m);
  for (std::uint32_t x : a.binary_dual.codewords())
    for (std::uint32_t y : a.binary.basis()) CHECK(std::popcount(x & y) % 2 == 0);

  std::mt19937_64 rng(29);
  for (long n : {4L, 6L, 8L}) {
    for (int t = 0; t < 20; ++t) {
      const std::size_t len = 2 + rng() % 5;
      const ZkCode c(n, len, random_rows(rng, n, len, 1 + rng() % 3));
      std::size_t count = 0;
      c.for_each_codeword([&](const Word& w) {
        bool in = true;
        for (long x : w) in &= x % (n / 2) == 0;
        count += in;
      });
      const C2Analysis r = c2_analysis(c);
      CHECK((std::size_t{1} << r.m) == count);
    }
  }
}

TEST_CASE("binary code basics") {
  const BinaryCode h(8, {0b00001111, 0b00110011, 0b01010101, 0b11111111});
  CHECK(h.dim() == 4);
  CHECK(h.is_type_ii());
  CHECK(h.dual() == h);
  const auto wd = h.weight_distribution();
  CHECK(wd[0] == 1);
  CHECK(wd[4] == 14);
  CHECK(wd[8] == 1);
  const BinaryCode r(3, {0b011, 0b110, 0b101});
  CHECK(r.dim() == 2);
  CHECK(r.dual().dim() == 1);
  CHECK(r.dual().contains(0b111));
  CHECK_FALSE(r.is_doubly_even());
}
