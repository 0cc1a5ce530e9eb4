#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnat/qseries.hpp"
#include "vnat/zkcode.hpp"

namespace vnat {

/// Irreducible modules of the rank-one fixed-point algebra at level k.
struct IrrepLabel {
  enum class Kind { Vplus, Vminus, VhalfPlus, VhalfMinus, Vr, T0plus, T0minus, T1plus, T1minus };
  Kind kind = Kind::Vplus;
  long r = 0;  // only for Vr, in 1..k-1

  /// V_r with r reduced modulo 2k and identified with 2k - r. Residues 0 and k
  /// are rejected: those cosets split into the +/- labels.
  static IrrepLabel vr(long k, long r);
  std::string to_string() const;
  bool operator==(const IrrepLabel& o) const { return kind == o.kind && r == o.r; }
};

/// i^e for e in 0..3.
struct Unit4 {
  int e = 0;
  Unit4 operator*(Unit4 o) const { return Unit4{(e + o.e) % 4}; }
  bool operator==(Unit4 o) const { return e == o.e; }
  int re() const { return e == 0 ? 1 : e == 2 ? -1 : 0; }
  int im() const { return e == 1 ? 1 : e == 3 ? -1 : 0; }
  /// Multiplicative order: 1, 4, 2 or 4.
  int order() const { return e == 0 ? 1 : e == 2 ? 2 : 4; }
  std::string to_string() const;
};

Unit4 mu_k(long k, const IrrepLabel& label);

/// Exact graded character of one label.
QSeries char_of_label(long k, const IrrepLabel& label, const Precision& prec);

/// Label of the tensor factor carrying residue `entry` in an untwisted summand
/// (the + component for entries 0 and k).
IrrepLabel untwisted_label(long k, long entry);

/// The smaller of c and -c in lexicographic order of residues in [0, 2k).
Word pair_representative(const Word& c, long modulus);

enum class LineKind { UntwistedC2, UntwistedPair, Twisted };
std::string to_string(LineKind kind);

/// Summand lines sharing one character. Untwisted lines are grouped by
/// residue-type composition (C2 lines additionally by binary weight, which the
/// composition determines); the twisted lines form one group.
struct LineGroup {
  LineKind kind = LineKind::UntwistedPair;
  Composition composition;  // untwisted only
  Integer lines = 0;
  Integer multiplicity = 1;  // per line
  QSeries character;         // per line
  /// Per coordinate i: number of lines whose i-th factor has an odd label
  /// (odd residue for untwisted lines, T_1 for twisted ones). Empty when the
  /// histogram carries no parity data.
  std::vector<Integer> odd_lines;
};

struct SummandTable {
  long k = 0;
  std::size_t length = 0;
  std::size_t m = 0;
  Integer code_card = 0;
  Precision prec;
  SweHistogram swe;
  std::vector<LineGroup> groups;
  QSeries untwisted;  // line sum over untwisted groups
  QSeries twisted;    // line sum over the twisted group
  QSeries total;

  Integer untwisted_lines() const;
  Integer twisted_lines() const;
  Integer twisted_multiplicity_total() const;
  nlohmann::json to_json() const;
  std::string to_table() const;
};

/// Builds the summand table through exponent < prec.trunc. The code must be a
/// Type II code of length 24 with minimum Euclidean weight 8k, and `swe` its
/// histogram. Throws InputNotExtremal.
SummandTable decompose(const ZkCode& c, const SweHistogram& swe, const Precision& prec);
/// Convenience: runs the enumeration itself (with parity tracking for odd k).
SummandTable decompose(const ZkCode& c, long order, const SweOptions& opts = {});

/// Precision used for a table that reports characters through q^order and
/// McKay-Thompson series through q^order.
Precision table_precision(long k, long order);

struct Assembly {
  QSeries line_sum;     // sum of line characters times multiplicities
  QSeries swe_route;    // 1/2 swe(a_0..a_k) + 1/2 b^24 + 2^11 (F^24 - G^24)
  QSeries theta_route;  // 1/2 Theta / phi^24 + 1/2 b^24 + twisted
  QSeries theta;        // lattice theta series from the swe, sum_x q^{<x,x>/2}
};

/// The three assemblies; throws InconsistencyError naming the first mismatch.
Assembly assemble_character(const SummandTable& t);

struct GaussianSeries {
  QSeries re;
  QSeries im;
};

struct TraceResult {
  QSeries untwisted;
  GaussianSeries twisted;
  GaussianSeries total;
};

/// Graded trace of sigma_i: the sum over lines of eigenvalue x multiplicity x
/// character. Needs parity data when k is odd.
TraceResult trace_sigma(const SummandTable& t, std::size_t i);

struct FourAReport {
  std::size_t coordinate = 0;
  QSeries series;          // q^-1 times the line-sum trace
  QSeries full_b_variant;  // same with b^24 in place of 1/2 b^24
  QSeries eta_quotient;
  std::optional<SeriesMismatch> half_mismatch;
  std::optional<SeriesMismatch> full_mismatch;
  /// "1/2", "1", "both" or "neither".
  std::string matching_variant() const;
  nlohmann::json to_json() const;
};

/// Odd k only.
FourAReport mckay_thompson_4A(const SummandTable& t, std::size_t i);

}  // namespace vnat
