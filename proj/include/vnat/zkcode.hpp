#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnat/arith.hpp"
#include "vnat/budget.hpp"

namespace vnat {

using Word = std::vector<long>;
using Matrix = std::vector<Word>;

/// Howell form of the row span of `rows` over Z_modulus. Rows are returned
/// in pivot order with pivots dividing the modulus, entries above each pivot
/// reduced into [0, pivot), and zero rows dropped. Two generator sets with
/// the same span give identical output.
Matrix howell_form(long modulus, std::size_t length, Matrix rows);

/// Linear code over Z_N, N = 2k, stored as its Howell form.
class ZkCode {
 public:
  ZkCode(long modulus, std::size_t length, Matrix rows);

  long modulus() const { return modulus_; }
  long k() const { return modulus_ / 2; }
  std::size_t length() const { return length_; }
  const Matrix& gens() const { return gens_; }
  /// Column of the leading entry of each generator.
  const std::vector<std::size_t>& pivot_columns() const { return pivot_cols_; }
  /// Additive order N / pivot of each generator; every codeword is uniquely
  /// sum u_j gens[j] with 0 <= u_j < orders()[j].
  const std::vector<long>& orders() const { return orders_; }
  Integer card() const;

  bool contains(Word w) const;
  Word combine(const std::vector<long>& coeffs) const;
  /// Calls f on every codeword (small codes only).
  void for_each_codeword(const std::function<void(const Word&)>& f) const;

  bool operator==(const ZkCode& other) const {
    return modulus_ == other.modulus_ && length_ == other.length_ && gens_ == other.gens_;
  }

  nlohmann::json to_json() const;

 private:
  long modulus_;
  std::size_t length_;
  Matrix gens_;
  std::vector<std::size_t> pivot_cols_;
  std::vector<long> orders_;
};

ZkCode dual(const ZkCode& c);

/// <x, y> mod N.
long inner_product(const Word& x, const Word& y, long modulus);
/// Sum of squares of minimal residues in (-k, k].
long euclidean_weight(const Word& c, long modulus);
/// Residue type min(x, N - x) of a single entry.
inline long residue_type(long x, long modulus) {
  x = mod(x, modulus);
  return x <= modulus - x ? x : modulus - x;
}

struct TypeIIReport {
  bool self_orthogonal = false;
  bool self_dual = false;
  bool type_ii = false;
  /// Human-readable reason for the first failed property.
  std::string witness;
};

/// Decides self-orthogonality, self-duality and the Type II property from the
/// generators alone. Ewt mod 4k is a quadratic form with polar form 2<x,y>,
/// so on a self-orthogonal code it is additive and checking generators suffices.
TypeIIReport verify_type_ii(const ZkCode& c);

/// Binary code of length <= 32 stored as a reduced row echelon basis of bit masks.
class BinaryCode {
 public:
  BinaryCode(std::size_t length, std::vector<std::uint32_t> rows);

  std::size_t length() const { return length_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<std::uint32_t>& basis() const { return basis_; }
  bool contains(std::uint32_t w) const;
  BinaryCode dual() const;
  std::vector<std::uint32_t> codewords() const;
  /// Count of codewords of each Hamming weight.
  std::vector<std::uint64_t> weight_distribution() const;
  bool is_self_orthogonal() const;
  bool is_doubly_even() const;
  bool is_type_ii() const { return is_doubly_even() && 2 * dim() == length_; }
  std::uint32_t all_ones() const { return length_ == 32 ? ~0u : ((1u << length_) - 1); }

  bool operator==(const BinaryCode& o) const { return length_ == o.length_ && basis_ == o.basis_; }

 private:
  std::size_t length_;
  std::vector<std::uint32_t> basis_;
};

struct C2Analysis {
  ZkCode c2;          // C intersected with (kZ)^n, as a code over Z_2k
  BinaryCode binary;  // entry k -> 1
  std::size_t m = 0;
  BinaryCode binary_dual;
  bool contains_all_ones = false;
  bool binary_type_ii = false;
};

C2Analysis c2_analysis(const ZkCode& c);

/// Residue-type composition (n_0, ..., n_k) of a codeword.
using Composition = std::vector<int>;

Composition composition_of(const Word& c, long modulus);
long composition_weight(const Composition& comp);  // sum n_t t^2

/// Codeword counts by composition. With parity tracking, odd[comp][i] counts
/// codewords of that composition whose i-th entry is odd (equivalently, has
/// odd residue type).
struct SweHistogram {
  long k = 0;
  std::size_t length = 0;
  bool tracks_parity = false;
  std::map<Composition, std::uint64_t> counts;
  std::map<Composition, std::vector<std::uint64_t>> odd;

  Integer total() const;
  /// Minimum Ewt over nonzero codewords, or nullopt if there are none.
  std::optional<long> min_nonzero_weight() const;
  /// counts - 2 * odd for coordinate i.
  std::map<Composition, std::int64_t> signed_counts(std::size_t i) const;
  SweHistogram& merge(const SweHistogram& other);
  bool operator==(const SweHistogram& o) const {
    return k == o.k && length == o.length && tracks_parity == o.tracks_parity && counts == o.counts && odd == o.odd;
  }
  nlohmann::json to_json() const;
};

struct SweOptions {
  bool track_parity = false;
  unsigned workers = 1;
  Budget budget;
  /// Called from the coordinating thread with (codewords done, total).
  std::function<void(std::uint64_t, std::uint64_t)> progress;
};

/// Work split: the first `split_depth` information symbols are fixed per slice.
std::uint64_t swe_slice_count(const ZkCode& c, std::size_t split_depth);
/// Enumerates slices [begin, end) of the split.
SweHistogram enumerate_swe_slices(const ZkCode& c, std::size_t split_depth, std::uint64_t begin,
                                  std::uint64_t end, const SweOptions& opts);
/// Full streamed enumeration. Throws BudgetExceeded with a progress report.
SweHistogram enumerate_swe(const ZkCode& c, const SweOptions& opts = {});

}  // namespace vnat
