// Fincke-Pohst enumeration of short lattice vectors.
//
// The basis is first LLL-reduced (integer row operations, floating-point
// Gram-Schmidt); this only changes the enumeration order, never the lattice.
// With q(x) = sum_i d_i (x_i + sum_{j>i} mu_ji x_j)^2 the search runs from
// x_{n-1} down to x_0.
//
// Pruning uses doubles. Every quantity stays below about 10^4 in magnitude and
// a level accumulates at most n^2 roundings, so the computed partial norms are
// within 1e-9 of the true ones; pruning against bound + 1e-6 can therefore
// only keep extra nodes, never drop a valid one. Each leaf is then accepted or
// rejected on the exact integer norm of its ambient vector, which is tracked
// incrementally level by level.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "vnat/errors.hpp"
#include "vnat/lattice.hpp"

namespace vnat {
namespace {

double dot(const Word& a, const Word& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return s;
}

// Textbook LLL with delta = 0.99 on integer rows.
Matrix lll_reduce(Matrix b) {
  const std::size_t n = b.size();
  if (n < 2) return b;
  std::vector<std::vector<double>> mu(n, std::vector<double>(n, 0));
  std::vector<double> bstar_norm(n);
  std::vector<std::vector<double>> bstar(n);
  auto gso = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      bstar[i].assign(b[i].begin(), b[i].end());
      for (std::size_t j = 0; j < i; ++j) {
        double s = 0;
        for (std::size_t c = 0; c < b[i].size(); ++c) s += static_cast<double>(b[i][c]) * bstar[j][c];
        mu[i][j] = s / bstar_norm[j];
        for (std::size_t c = 0; c < b[i].size(); ++c) bstar[i][c] -= mu[i][j] * bstar[j][c];
      }
      double s = 0;
      for (double x : bstar[i]) s += x * x;
      bstar_norm[i] = s;
    }
  };
  gso();
  std::size_t k = 1;
  long guard = 0;
  while (k < n) {
    if (++guard > 1000000) throw std::runtime_error("lll_reduce: no convergence");
    for (std::size_t j = k; j-- > 0;) {
      const double q = std::round(mu[k][j]);
      if (q == 0) continue;
      const long qi = static_cast<long>(q);
      for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= qi * b[j][c];
      for (std::size_t l = 0; l <= j; ++l) mu[k][l] -= q * (l == j ? 1.0 : mu[j][l]);
    }
    if (bstar_norm[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar_norm[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gso();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return b;
}

struct Tree {
  std::size_t n = 0, dim = 0;
  Matrix basis;                       // reduced rows
  std::vector<double> d;              // Gram-Schmidt norms (units of scale)
  std::vector<std::vector<double>> mu;  // mu[j][i], j > i
  double bound = 0;                   // in units, with slack
  long exact_bound = 0;               // floor(bound / scale)
};

Tree build_tree(const IntegralLattice& l, const Rational& bound) {
  Tree t;
  t.n = l.rank();
  t.dim = l.ambient_dim();
  t.basis = lll_reduce(l.basis());
  // Exact Gram-Schmidt data from the integer Gram matrix, then rounded.
  const std::size_t n = t.n;
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  std::vector<Rational> dd(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Rational g = static_cast<long>(dot(t.basis[i], t.basis[j]));
      for (std::size_t k = 0; k < j; ++k) g -= m[i][k] * m[j][k] * dd[k];
      if (j < i) {
        m[i][j] = g / dd[j];
      } else {
        if (g <= 0) throw std::invalid_argument("enumerate_vectors: Gram matrix is not positive definite");
        dd[i] = g;
      }
    }
  }
  t.d.resize(n);
  t.mu.assign(n, std::vector<double>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    t.d[i] = dd[i].get_d();
    for (std::size_t j = 0; j < i; ++j) t.mu[i][j] = m[i][j].get_d();
  }
  const Rational units = bound / l.scale();
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), units.get_num_mpz_t(), units.get_den_mpz_t());
  t.exact_bound = fl.get_si();
  t.bound = static_cast<double>(t.exact_bound) + 1e-6;
  return t;
}

class Walker {
 public:
  Walker(const Tree& t, const Budget& budget, const std::atomic<bool>& stop, const VectorSink& sink, unsigned id)
      : t_(t), budget_(budget), stop_(stop), sink_(sink), id_(id), x_(t.n, 0), v_(t.n + 1, std::vector<long>(t.dim, 0)),
        out_(t.dim) {}

  // Runs the subtree with x_{n-1} = top. Returns false when interrupted.
  bool run_top(long top) {
    const std::size_t i = t_.n - 1;
    const double y = static_cast<double>(top);
    const double p = t_.d[i] * y * y;
    if (p > t_.bound) return true;
    x_[i] = top;
    for (std::size_t c = 0; c < t_.dim; ++c) v_[i][c] = top * t_.basis[i][c];
    if (i == 0) {
      leaf();
      return true;
    }
    return descend(i - 1, p, top == 0);
  }

  std::pair<long, long> top_range() const {
    const std::size_t i = t_.n - 1;
    const double w = std::sqrt(t_.bound / t_.d[i]);
    return {0, static_cast<long>(std::floor(w + 1e-9))};
  }

  std::uint64_t emitted = 0;
  bool interrupted = false;

 private:
  bool descend(std::size_t i, double partial, bool zero_above) {
    if ((++nodes_ & 0xFFFF) == 0 && (stop_.load(std::memory_order_relaxed) || budget_.expired())) {
      interrupted = true;
      return false;
    }
    double c = 0;
    for (std::size_t j = i + 1; j < t_.n; ++j) c -= t_.mu[j][i] * static_cast<double>(x_[j]);
    const double r = (t_.bound - partial) / t_.d[i];
    if (r < 0) return true;
    const double w = std::sqrt(r);
    long lo = static_cast<long>(std::ceil(c - w - 1e-9));
    const long hi = static_cast<long>(std::floor(c + w + 1e-9));
    if (zero_above) lo = std::max(lo, 0L);
    if (lo > hi) return true;
    const std::vector<long>& up = v_[i + 1];
    std::vector<long>& cur = v_[i];
    const Word& b = t_.basis[i];
    for (std::size_t k = 0; k < t_.dim; ++k) cur[k] = up[k] + lo * b[k];
    for (long xi = lo; xi <= hi; ++xi) {
      if (xi != lo) {
        for (std::size_t k = 0; k < t_.dim; ++k) cur[k] += b[k];
      }
      const double y = static_cast<double>(xi) - c;
      const double p = partial + t_.d[i] * y * y;
      if (p > t_.bound) continue;
      x_[i] = xi;
      if (i == 0) {
        leaf();
      } else if (!descend(i - 1, p, zero_above && xi == 0)) {
        return false;
      }
    }
    x_[i] = 0;
    return true;
  }

  void leaf() {
    const std::vector<long>& v = v_[0];
    long s = 0;
    for (std::size_t k = 0; k < t_.dim; ++k) s += v[k] * v[k];
    if (s > t_.exact_bound) return;
    for (std::size_t k = 0; k < t_.dim; ++k) out_[k] = v[k];
    ++emitted;
    sink_(id_, out_.data(), s);
  }

  const Tree& t_;
  const Budget& budget_;
  const std::atomic<bool>& stop_;
  const VectorSink& sink_;
  unsigned id_;
  std::vector<long> x_;
  std::vector<std::vector<long>> v_;  // v_[i] = sum_{j >= i} x_j b_j; v_[n] = 0
  std::vector<long> out_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::uint64_t enumerate_vectors(const IntegralLattice& l, const Rational& bound, const VectorSink& sink,
                                const EnumOptions& opts) {
  if (bound < 0) return 0;
  if (l.rank() == 0) {
    sink(0, nullptr, 0);
    return 1;
  }
  const Tree tree = build_tree(l, bound);
  const unsigned workers = std::max(1u, opts.workers);
  std::atomic<bool> stop{false};
  std::vector<Walker> walkers;
  walkers.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) walkers.emplace_back(tree, opts.budget, stop, sink, w);
  const auto [lo, hi] = walkers[0].top_range();
  std::atomic<long> next{lo};
  auto work = [&](unsigned id) {
    while (!stop.load()) {
      const long top = next.fetch_add(1);
      if (top > hi) return;
      if (!walkers[id].run_top(top)) {
        stop = true;
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  std::uint64_t total = 0;
  for (const auto& w : walkers) total += w.emitted;
  if (stop) {
    throw BudgetExceeded("lattice enumeration exceeded its time budget",
                         "emitted " + std::to_string(total) + " vectors in " +
                             std::to_string(opts.budget.elapsed_seconds()) + " s");
  }
  return total;
}

std::map<Rational, std::uint64_t> count_by_norm(const IntegralLattice& l, const Rational& bound,
                                                const EnumOptions& opts) {
  std::vector<std::map<long, std::uint64_t>> per(std::max(1u, opts.workers));
  enumerate_vectors(
      l, bound, [&](unsigned w, const long*, long units) { ++per[w][units]; }, opts);
  std::map<Rational, std::uint64_t> out;
  for (const auto& m : per) {
    for (const auto& [units, n] : m) out[Rational(units) * l.scale()] += units == 0 ? n : 2 * n;
  }
  return out;
}

}  // namespace vnat
