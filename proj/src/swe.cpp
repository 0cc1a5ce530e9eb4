// Streamed symmetrized-weight enumeration.
//
// Codewords are sum_j u_j g_j over the Howell generators with u_j in [0, o_j).
// A slice fixes the first `split_depth` digits; inside a slice the remaining
// digits follow the reflected mixed-radix Gray code (Knuth, TAOCP 7.2.1.1,
// Algorithm H), so each step adds +g_j or -g_j to the running word.
//
// The word lives in 32 bytes. A composition is indexed densely as
// sum_{t=1..k} n_t (n+1)^(t-1). Parity tracking keeps a byte accumulator of
// (word & 1) per composition, flushed to 64-bit counters every 255 hits.

#include <algorithm>
#include <bit>
#include <atomic>
#include <cstring>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "vnat/errors.hpp"
#include "vnat/zkcode.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace vnat {
namespace {

constexpr std::size_t kLanes = 32;
constexpr std::uint64_t kDenseLimit = 1u << 20;

struct alignas(32) Lane32 {
  std::uint8_t b[kLanes];
};

struct Accumulator {
  std::size_t n;
  long k;
  bool parity;
  std::uint64_t radix;  // n + 1
  bool dense;
  std::vector<std::uint64_t> dense_counts;
  std::vector<std::uint8_t> dense_small;
  std::vector<Lane32> dense_acc;
  std::vector<std::uint64_t> dense_odd;
  struct Sparse {
    std::uint64_t count = 0;
    std::uint8_t small = 0;
    Lane32 acc{};
    std::vector<std::uint64_t> odd;
  };
  std::unordered_map<std::uint64_t, Sparse> sparse;
  std::uint64_t seen = 0;
  long min_weight_seen = -1;

  Accumulator(std::size_t n_, long k_, bool parity_) : n(n_), k(k_), parity(parity_), radix(n_ + 1) {
    std::uint64_t size = 1;
    dense = true;
    for (long t = 1; t <= k; ++t) {
      size *= radix;
      if (size > kDenseLimit) {
        dense = false;
        break;
      }
    }
    if (dense) {
      dense_counts.assign(size, 0);
      if (parity) {
        dense_small.assign(size, 0);
        dense_acc.assign(size, Lane32{});
        dense_odd.assign(size * n, 0);
      }
    }
  }

  static void flush(const Lane32& acc, std::uint64_t* dst, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] += acc.b[i];
  }

  inline void add_parity(Lane32& acc, const Lane32& word) {
#if defined(__AVX2__)
    __m256i a = _mm256_load_si256(reinterpret_cast<const __m256i*>(acc.b));
    __m256i w = _mm256_load_si256(reinterpret_cast<const __m256i*>(word.b));
    a = _mm256_add_epi8(a, _mm256_and_si256(w, _mm256_set1_epi8(1)));
    _mm256_store_si256(reinterpret_cast<__m256i*>(acc.b), a);
#else
    for (std::size_t i = 0; i < kLanes; ++i) acc.b[i] = static_cast<std::uint8_t>(acc.b[i] + (word.b[i] & 1));
#endif
  }

  inline void record(std::uint64_t idx, const Lane32& word) {
    if (dense) {
      ++dense_counts[idx];
      if (parity) {
        add_parity(dense_acc[idx], word);
        if (++dense_small[idx] == 255) {
          flush(dense_acc[idx], &dense_odd[idx * n], n);
          dense_acc[idx] = Lane32{};
          dense_small[idx] = 0;
        }
      }
      return;
    }
    Sparse& s = sparse[idx];
    ++s.count;
    if (parity) {
      if (s.odd.empty()) s.odd.assign(n, 0);
      add_parity(s.acc, word);
      if (++s.small == 255) {
        flush(s.acc, s.odd.data(), n);
        s.acc = Lane32{};
        s.small = 0;
      }
    }
  }

  Composition decode(std::uint64_t idx) const {
    Composition comp(static_cast<std::size_t>(k + 1), 0);
    int rest = static_cast<int>(n);
    for (long t = 1; t <= k; ++t) {
      comp[static_cast<std::size_t>(t)] = static_cast<int>(idx % radix);
      rest -= comp[static_cast<std::size_t>(t)];
      idx /= radix;
    }
    comp[0] = rest;
    return comp;
  }

  SweHistogram finish() {
    SweHistogram h;
    h.k = k;
    h.length = n;
    h.tracks_parity = parity;
    auto emit = [&](std::uint64_t idx, std::uint64_t count, const std::uint64_t* odd) {
      if (count == 0) return;
      Composition comp = decode(idx);
      h.counts[comp] += count;
      if (parity) {
        auto& dst = h.odd[comp];
        dst.resize(n, 0);
        for (std::size_t i = 0; i < n; ++i) dst[i] += odd[i];
      }
    };
    if (dense) {
      for (std::uint64_t idx = 0; idx < dense_counts.size(); ++idx) {
        if (parity && dense_counts[idx] != 0) flush(dense_acc[idx], &dense_odd[idx * n], n);
        emit(idx, dense_counts[idx], parity ? &dense_odd[idx * n] : nullptr);
      }
    } else {
      for (auto& [idx, s] : sparse) {
        if (parity) flush(s.acc, s.odd.data(), n);
        emit(idx, s.count, parity ? s.odd.data() : nullptr);
      }
    }
    return h;
  }
};

struct Kernel {
  const ZkCode& code;
  std::size_t n;
  long modulus;
  long k;
  std::vector<Lane32> plus, minus;  // g_j and N - g_j
  std::uint32_t lane_mask;
  std::vector<std::uint64_t> weight_of_type;  // (n+1)^(t-1) for t >= 1

  explicit Kernel(const ZkCode& c) : code(c), n(c.length()), modulus(c.modulus()), k(c.k()) {
    if (n > kLanes) throw std::invalid_argument("enumerate_swe: length must be <= 32");
    if (modulus > 126) throw std::invalid_argument("enumerate_swe: modulus must be <= 126");
    for (const Word& g : c.gens()) {
      Lane32 p{}, m{};
      for (std::size_t i = 0; i < n; ++i) {
        p.b[i] = static_cast<std::uint8_t>(g[i]);
        m.b[i] = static_cast<std::uint8_t>(mod(-g[i], modulus));
      }
      plus.push_back(p);
      minus.push_back(m);
    }
    lane_mask = n == 32 ? ~0u : ((1u << n) - 1);
    std::uint64_t w = 1;
    weight_of_type.assign(static_cast<std::size_t>(k + 1), 0);
    for (long t = 1; t <= k; ++t) {
      weight_of_type[static_cast<std::size_t>(t)] = w;
      w *= n + 1;
    }
  }

  static inline void add_mod(Lane32& w, const Lane32& d, long modulus) {
#if defined(__AVX2__)
    __m256i a = _mm256_load_si256(reinterpret_cast<const __m256i*>(w.b));
    __m256i b = _mm256_load_si256(reinterpret_cast<const __m256i*>(d.b));
    a = _mm256_add_epi8(a, b);
    a = _mm256_min_epu8(a, _mm256_sub_epi8(a, _mm256_set1_epi8(static_cast<char>(modulus))));
    _mm256_store_si256(reinterpret_cast<__m256i*>(w.b), a);
#else
    for (std::size_t i = 0; i < kLanes; ++i) {
      unsigned s = unsigned(w.b[i]) + d.b[i];
      w.b[i] = static_cast<std::uint8_t>(s >= unsigned(modulus) ? s - unsigned(modulus) : s);
    }
#endif
  }

  inline std::uint64_t index_of(const Lane32& w, long* weight) const {
    std::uint64_t idx = 0;
    long ewt = 0;
#if defined(__AVX2__)
    const __m256i a = _mm256_load_si256(reinterpret_cast<const __m256i*>(w.b));
    const __m256i t = _mm256_min_epu8(a, _mm256_sub_epi8(_mm256_set1_epi8(static_cast<char>(modulus)), a));
    for (long ty = 1; ty <= k; ++ty) {
      const std::uint32_t m =
          static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(t, _mm256_set1_epi8(static_cast<char>(ty))))) &
          lane_mask;
      const long cnt = std::popcount(m);
      idx += static_cast<std::uint64_t>(cnt) * weight_of_type[static_cast<std::size_t>(ty)];
      ewt += cnt * ty * ty;
    }
#else
    std::uint64_t cnt[64] = {};
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned x = w.b[i];
      ++cnt[std::min<unsigned>(x, unsigned(modulus) - x)];
    }
    for (long ty = 1; ty <= k; ++ty) {
      idx += cnt[ty] * weight_of_type[static_cast<std::size_t>(ty)];
      ewt += static_cast<long>(cnt[ty]) * ty * ty;
    }
#endif
    *weight = ewt;
    return idx;
  }

  std::uint64_t slice_count(std::size_t depth) const {
    std::uint64_t s = 1;
    for (std::size_t j = 0; j < depth && j < code.orders().size(); ++j) s *= static_cast<std::uint64_t>(code.orders()[j]);
    return s;
  }

  // Enumerates one slice; returns false if the budget expired mid-slice.
  bool run_slice(std::size_t depth, std::uint64_t slice, Accumulator& acc, const Budget& budget) const {
    const auto& orders = code.orders();
    depth = std::min(depth, orders.size());
    Lane32 w{};
    for (std::size_t j = 0; j < depth; ++j) {
      const auto o = static_cast<std::uint64_t>(orders[j]);
      const std::uint64_t u = slice % o;
      slice /= o;
      for (std::uint64_t r = 0; r < u; ++r) add_mod(w, plus[j], modulus);
    }
    // Algorithm H over digits depth..end.
    const std::size_t m = orders.size() - depth;
    std::vector<long> a(m, 0), o(m, 1), radix(m);
    std::vector<std::size_t> f(m + 1);
    for (std::size_t j = 0; j <= m; ++j) f[j] = j;
    for (std::size_t j = 0; j < m; ++j) radix[j] = orders[depth + j];
    const Lane32* pl = plus.data() + depth;
    const Lane32* mi = minus.data() + depth;
    std::uint64_t steps = 0;
    while (true) {
      long ewt;
      const std::uint64_t idx = index_of(w, &ewt);
      acc.record(idx, w);
      if (ewt != 0 && (acc.min_weight_seen < 0 || ewt < acc.min_weight_seen)) acc.min_weight_seen = ewt;
      ++acc.seen;
      const std::size_t j = f[0];
      f[0] = 0;
      if (j == m) break;
      a[j] += o[j];
      add_mod(w, o[j] > 0 ? pl[j] : mi[j], modulus);
      if (a[j] == 0 || a[j] == radix[j] - 1) {
        o[j] = -o[j];
        f[j] = f[j + 1];
        f[j + 1] = j + 1;
      }
      if ((++steps & 0xFFFFF) == 0 && budget.expired()) return false;
    }
    return true;
  }
};

}  // namespace

std::uint64_t swe_slice_count(const ZkCode& c, std::size_t split_depth) {
  return Kernel(c).slice_count(split_depth);
}

SweHistogram enumerate_swe_slices(const ZkCode& c, std::size_t split_depth, std::uint64_t begin, std::uint64_t end,
                                  const SweOptions& opts) {
  const Kernel kernel(c);
  const std::uint64_t total_slices = kernel.slice_count(split_depth);
  end = std::min(end, total_slices);
  const unsigned workers = std::max(1u, opts.workers);
  std::atomic<std::uint64_t> next{begin};
  std::atomic<bool> out_of_time{false};
  std::atomic<std::uint64_t> done{0};
  std::vector<Accumulator> accs;
  for (unsigned w = 0; w < workers; ++w) accs.emplace_back(c.length(), c.k(), opts.track_parity);

  auto work = [&](unsigned id) {
    Accumulator& acc = accs[id];
    while (!out_of_time.load(std::memory_order_relaxed)) {
      const std::uint64_t s = next.fetch_add(1);
      if (s >= end) return;
      if (opts.budget.expired() || !kernel.run_slice(split_depth, s, acc, opts.budget)) {
        out_of_time = true;
        return;
      }
      done.fetch_add(1);
    }
  };
  if (workers == 1) {
    std::uint64_t last_report = 0;
    while (true) {
      const std::uint64_t s = next.fetch_add(1);
      if (s >= end || out_of_time) break;
      if (opts.budget.expired() || !kernel.run_slice(split_depth, s, accs[0], opts.budget)) {
        out_of_time = true;
        break;
      }
      if (opts.progress && accs[0].seen - last_report >= (1u << 26)) {
        opts.progress(accs[0].seen, 0);
        last_report = accs[0].seen;
      }
    }
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  std::uint64_t seen = 0;
  long min_seen = -1;
  for (const auto& a : accs) {
    seen += a.seen;
    if (a.min_weight_seen >= 0 && (min_seen < 0 || a.min_weight_seen < min_seen)) min_seen = a.min_weight_seen;
  }
  if (out_of_time) {
    std::ostringstream os;
    os << "enumerated " << seen << " of " << c.card().get_str() << " codewords in " << opts.budget.elapsed_seconds()
       << " s";
    if (min_seen >= 0) os << "; smallest nonzero Ewt seen so far " << min_seen;
    throw BudgetExceeded("swe enumeration exceeded its time budget", os.str());
  }
  SweHistogram h;
  h.k = c.k();
  h.length = c.length();
  h.tracks_parity = opts.track_parity;
  for (auto& a : accs) h.merge(a.finish());
  return h;
}

SweHistogram enumerate_swe(const ZkCode& c, const SweOptions& opts) {
  // Split until there are enough slices to balance workers and check the budget.
  const std::size_t want = std::max<std::size_t>(64, 16 * std::max(1u, opts.workers));
  std::size_t depth = 0;
  while (depth < c.orders().size() && swe_slice_count(c, depth) < want) ++depth;
  if (depth == c.orders().size() && depth > 0) --depth;
  return enumerate_swe_slices(c, depth, 0, swe_slice_count(c, depth), opts);
}

}  // namespace vnat
