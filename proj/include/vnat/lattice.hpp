#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vnat/arith.hpp"
#include "vnat/budget.hpp"
#include "vnat/zkcode.hpp"

namespace vnat {

using RationalMatrix = std::vector<std::vector<Rational>>;
using IntegerMatrix = std::vector<std::vector<Integer>>;

/// Lattice spanned by the rows of an integer basis in ambient Z^d, with inner
/// product scale * (x . y). Gram = scale * basis * basis^T.
class IntegralLattice {
 public:
  IntegralLattice(Matrix basis, Rational scale);

  std::size_t rank() const { return basis_.size(); }
  std::size_t ambient_dim() const { return dim_; }
  const Matrix& basis() const { return basis_; }
  const Rational& scale() const { return scale_; }

  /// basis * basis^T (exact integers).
  IntegerMatrix gram_units() const;
  RationalMatrix gram() const;
  Rational determinant() const;
  bool is_integral() const;
  bool is_even() const;
  bool is_unimodular() const { return is_integral() && determinant() == 1; }

  Rational inner(const Word& a, const Word& b) const;
  Rational norm(const Word& a) const { return inner(a, a); }
  Word ambient(const std::vector<long>& coeffs) const;
  /// Integer coordinates of an ambient vector, or nullopt if it is not in the lattice.
  std::optional<std::vector<Integer>> coordinates(const Word& v) const;
  bool contains(const Word& v) const { return coordinates(v).has_value(); }

 private:
  Matrix basis_;
  Rational scale_;
  std::size_t dim_;
};

/// {x in Z^n : x mod N in C} with the given scale. The basis is triangular:
/// the lifted Howell row at each pivot column, N e_c at every other column.
IntegralLattice lattice_from_code(const ZkCode& c, const Rational& scale);
/// Generalized Construction A: lattice_from_code(C, 1/(2k)).
IntegralLattice construction_a(const ZkCode& c);

/// Leech lattice in sqrt(8)-scaled coordinates (scale 1/8), built from a
/// binary Golay code of length 24. Throws FixtureCorrupt if `golay` is not a
/// doubly-even self-dual [24, 12, 8] code.
IntegralLattice standard_leech(const BinaryCode& golay);

struct EnumOptions {
  unsigned workers = 1;
  Budget budget;
};

/// Receives each lattice vector with norm <= bound once up to sign, as ambient
/// coordinates (length ambient_dim) and its exact norm in units of scale
/// (norm = norm_units * scale). `worker` identifies the calling thread.
using VectorSink = std::function<void(unsigned worker, const long* ambient, long norm_units)>;

/// Fincke-Pohst enumeration. Returns the number of vectors emitted.
std::uint64_t enumerate_vectors(const IntegralLattice& l, const Rational& bound, const VectorSink& sink,
                                const EnumOptions& opts = {});
/// Number of lattice vectors (both signs) of each norm <= bound.
std::map<Rational, std::uint64_t> count_by_norm(const IntegralLattice& l, const Rational& bound,
                                                const EnumOptions& opts = {});

struct LeechCertificate {
  bool integral = false;
  bool even = false;
  bool unimodular = false;
  bool rootless = false;
  Rational determinant;
  std::string witness;
  bool ok() const { return integral && even && unimodular && rootless; }
};
/// Even, unimodular and no vectors of norm 2: the characterization of the Leech lattice in rank 24.
LeechCertificate certify_leech(const IntegralLattice& l, const EnumOptions& opts = {});

struct SnfResult {
  std::vector<Integer> diag;
  Integer index;
};
/// Smith normal form diagonal of an integer matrix (nonzero entries only).
std::vector<Integer> smith_diagonal(IntegerMatrix m);
/// Index of sub in super via the SNF of sub's coordinates in super's basis.
/// Throws NotSublatticeError if some basis vector of sub is not in super.
SnfResult snf_index(const IntegralLattice& sub, const IntegralLattice& super);
/// |N / (2 super intersect N)| = 2^(number of odd SNF diagonal entries).
Integer two_quotient_order(const SnfResult& snf);

/// 24 mutually orthogonal vectors of norm 2k, one per +/- pair, in ambient coordinates.
struct Frame {
  long k = 0;
  Matrix vectors;
};

/// Throws UnverifiedObject with a reason unless every vector lies in l, has
/// norm 2k, and the vectors are pairwise orthogonal.
void verify_frame(const IntegralLattice& l, const Frame& f);
/// The coordinate frame {2k e_i} of a Construction A lattice.
Frame standard_frame(long k, std::size_t n = 24);

struct FrameSearchOptions {
  std::uint64_t seed = 1;
  Budget budget;
  unsigned workers = 1;
  std::size_t pool = 64;     // candidates scored per step
  std::size_t probe = 4000;  // vectors used to score a candidate
  std::function<void(const std::string&)> log;
};

struct FrameSearchResult {
  Frame frame;
  std::uint64_t attempts = 0;
  std::uint64_t vectors = 0;  // norm-2k vectors up to sign
  double seconds = 0;
  std::vector<std::string> transcript;
};

/// Randomized greedy search with restarts: enumerate norm-2k vectors, then
/// repeatedly pick the sampled candidate orthogonal to the most sampled
/// others and keep only candidates orthogonal to it. Deterministic in seed.
/// Throws BudgetExceeded.
FrameSearchResult frame_search(const IntegralLattice& l, long k, const FrameSearchOptions& opts);

/// C = L/N: the codeword of a basis vector b is (<b, f_j> mod 2k)_j.
ZkCode frame_to_code(const IntegralLattice& l, const Frame& f);
/// The lattice spanned by the frame vectors.
IntegralLattice frame_lattice(const IntegralLattice& l, const Frame& f);

}  // namespace vnat
