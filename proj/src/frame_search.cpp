#include <algorithm>
#include <cstring>
#include <mutex>
#include <limits>
#include <random>
#include <sstream>

#include "vnat/errors.hpp"
#include "vnat/lattice.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace vnat {
namespace {

struct alignas(32) Packed {
  std::int8_t c[32];
  bool operator<(const Packed& o) const { return std::memcmp(c, o.c, 32) < 0; }
};

inline int packed_dot(const Packed& a, const Packed& b) {
#if defined(__AVX2__)
  const __m256i x = _mm256_load_si256(reinterpret_cast<const __m256i*>(a.c));
  const __m256i y = _mm256_load_si256(reinterpret_cast<const __m256i*>(b.c));
  // |x| * sign(y, x) keeps the products exact: entries are tiny.
  const __m256i prod = _mm256_maddubs_epi16(_mm256_abs_epi8(x), _mm256_sign_epi8(y, x));
  const __m256i s32 = _mm256_madd_epi16(prod, _mm256_set1_epi16(1));
  __m128i s = _mm_add_epi32(_mm256_castsi256_si128(s32), _mm256_extracti128_si256(s32, 1));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, 0x4E));
  s = _mm_add_epi32(s, _mm_shuffle_epi32(s, 0xB1));
  return _mm_cvtsi128_si32(s);
#else
  int s = 0;
  for (int i = 0; i < 32; ++i) s += a.c[i] * b.c[i];
  return s;
#endif
}

// Uniform draw in [0, n) from a 64-bit engine by rejection; identical on every platform.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  while (true) {
    const std::uint64_t r = rng();
    if (r < limit) return r % n;
  }
}

}  // namespace

FrameSearchResult frame_search(const IntegralLattice& l, long k, const FrameSearchOptions& opts) {
  if (k < 1) throw std::invalid_argument("frame_search: k must be positive");
  if (l.ambient_dim() > 32) throw std::invalid_argument("frame_search: ambient dimension must be <= 32");
  if (!l.is_integral()) throw std::invalid_argument("frame_search: lattice must be integral");
  FrameSearchResult res;
  auto note = [&](const std::string& s) {
    res.transcript.push_back(s);
    if (opts.log) opts.log(s);
  };

  // 1. All norm-2k vectors up to sign, packed as int8, sorted so the search
  //    does not depend on enumeration order or worker count.
  const Rational target(2 * k);
  const Rational units_r = target / l.scale();
  if (units_r.get_den() != 1) throw std::invalid_argument("frame_search: norm 2k is not attainable at this scale");
  const long units = units_r.get_num().get_si();
  std::vector<std::vector<Packed>> per(std::max(1u, opts.workers));
  bool overflow = false;
  EnumOptions eo;
  eo.workers = opts.workers;
  eo.budget = opts.budget;
  enumerate_vectors(
      l, target,
      [&](unsigned w, const long* v, long n) {
        if (n != units) return;
        Packed p{};
        for (std::size_t i = 0; i < l.ambient_dim(); ++i) {
          if (v[i] < -127 || v[i] > 127) overflow = true;
          p.c[i] = static_cast<std::int8_t>(v[i]);
        }
        per[w].push_back(p);
      },
      eo);
  if (overflow) throw std::invalid_argument("frame_search: vector entries exceed the packed range");
  std::vector<Packed> all;
  for (auto& v : per) {
    all.insert(all.end(), v.begin(), v.end());
    std::vector<Packed>().swap(v);
  }
  std::sort(all.begin(), all.end());
  res.vectors = all.size();
  {
    std::ostringstream os;
    os << "enumerated " << all.size() << " vectors of norm " << 2 * k << " up to sign in " << opts.budget.elapsed_seconds()
       << " s";
    note(os.str());
  }
  const std::size_t want = l.rank();
  if (all.empty()) throw BudgetExceeded("frame_search: lattice has no vectors of norm " + std::to_string(2 * k), "0 vectors");

  // 2. Randomized greedy with restarts.
  std::mt19937_64 rng(opts.seed);
  std::vector<std::uint32_t> cand, next_cand;
  std::vector<std::uint32_t> chosen;
  while (true) {
    ++res.attempts;
    cand.resize(all.size());
    for (std::uint32_t i = 0; i < all.size(); ++i) cand[i] = i;
    chosen.clear();
    while (!cand.empty() && chosen.size() < want) {
      if (opts.budget.expired()) {
        std::ostringstream os;
        os << res.attempts << " attempts; current attempt reached " << chosen.size() << " of " << want << " vectors";
        throw BudgetExceeded("frame search exceeded its time budget", os.str());
      }
      const std::size_t pool = std::min(opts.pool, cand.size());
      const std::size_t probe = std::min(opts.probe, cand.size());
      std::uint32_t best = cand[0];
      long best_score = -1;
      std::uint64_t best_tie = 0;
      std::vector<std::uint32_t> probes(probe);
      for (auto& p : probes) p = cand.size() <= opts.probe ? 0 : cand[draw(rng, cand.size())];
      if (cand.size() <= opts.probe) std::copy(cand.begin(), cand.end(), probes.begin());
      for (std::size_t s = 0; s < pool; ++s) {
        const std::uint32_t c = cand.size() <= opts.pool ? cand[s] : cand[draw(rng, cand.size())];
        long score = 0;
        for (std::uint32_t p : probes) score += packed_dot(all[c], all[p]) == 0;
        const std::uint64_t tie = rng();
        if (score > best_score || (score == best_score && tie < best_tie)) {
          best = c;
          best_score = score;
          best_tie = tie;
        }
      }
      chosen.push_back(best);
      next_cand.clear();
      for (std::uint32_t c : cand) {
        if (packed_dot(all[c], all[best]) == 0) next_cand.push_back(c);
      }
      cand.swap(next_cand);
    }
    {
      std::ostringstream os;
      os << "attempt " << res.attempts << ": " << chosen.size() << " of " << want << " vectors";
      note(os.str());
    }
    if (chosen.size() == want) break;
  }
  res.frame.k = k;
  for (std::uint32_t c : chosen) {
    Word v(l.ambient_dim());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = all[c].c[i];
    res.frame.vectors.push_back(std::move(v));
  }
  verify_frame(l, res.frame);
  res.seconds = opts.budget.elapsed_seconds();
  return res;
}

}  // namespace vnat
