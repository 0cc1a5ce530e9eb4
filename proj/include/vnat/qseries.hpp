#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vnat/arith.hpp"

namespace vnat {

/// Exponent grid and precision for a family of series: exponents are multiples
/// of 1/denom, and every coefficient at exponent < trunc/denom is known.
struct Precision {
  long denom = 1;
  long trunc = 0;  // in units of 1/denom

  /// Precision covering every exponent <= order (integer order).
  static Precision through_order(long denom, long order) {
    return Precision{denom, (order + 1) * denom};
  }
  Precision shifted(long units) const { return Precision{denom, trunc + units}; }
};

/// First exponent (in units of 1/denom) where two series differ.
struct SeriesMismatch {
  long denom;
  long exponent;
  Rational lhs;
  Rational rhs;
  Rational exponent_value() const { return make_rational(exponent, denom); }
};

/// Truncated Laurent series in q with exponents in (1/denom)Z and exact
/// rational coefficients. Coefficients at exponents >= trunc are unknown;
/// asking for them is an error. Exact series (monomials, constants) carry
/// trunc == kExact.
class QSeries {
 public:
  static constexpr long kExact = std::numeric_limits<long>::max() / 4;

  QSeries() = default;  // exact zero

  static QSeries zero(long denom, long trunc);
  static QSeries constant(const Rational& c);
  static QSeries monomial(const Rational& c, long exponent, long denom);
  /// Dense coefficients starting at min_exp; trailing/leading zeros are trimmed.
  static QSeries from_coeffs(long denom, long min_exp, std::vector<Rational> coeffs, long trunc);

  long denom() const { return denom_; }
  long trunc() const { return trunc_; }
  bool is_exact() const { return trunc_ >= kExact; }
  /// True if every known coefficient vanishes.
  bool is_zero() const { return coeffs_.empty(); }
  /// Smallest exponent with a nonzero coefficient, or trunc for a zero series.
  long valuation() const { return coeffs_.empty() ? trunc_ : min_exp_; }
  /// One past the largest stored exponent.
  long end_exponent() const { return min_exp_ + static_cast<long>(coeffs_.size()); }

  Rational coeff(long exponent) const;
  Rational coeff_at(const Rational& exponent) const;
  std::vector<std::pair<long, Rational>> terms() const;
  bool is_integral() const;
  /// True when every nonzero term has an exponent that is a multiple of `step` units.
  bool exponents_divisible_by(long step) const;

  QSeries rescaled(long new_denom) const;
  QSeries truncated(long new_trunc) const;
  /// Multiplies by q^(units/denom).
  QSeries shifted(long units) const;
  /// Substitutes q -> q^factor for a positive integer factor (denominator unchanged).
  QSeries dilated(long factor) const;

  QSeries operator-() const;
  QSeries& operator+=(const QSeries& other);
  QSeries& operator-=(const QSeries& other);
  QSeries& operator*=(const QSeries& other);
  QSeries& operator*=(const Rational& scalar);
  friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
  friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  friend QSeries operator*(QSeries a, const Rational& s) { return a *= s; }
  friend QSeries operator*(const Rational& s, QSeries a) { return a *= s; }

  /// Adds scale * other into this series (used for large linear combinations).
  void add_scaled(const QSeries& other, const Rational& scale);

  /// Coefficientwise comparison below the smaller truncation order.
  friend std::optional<SeriesMismatch> first_mismatch(const QSeries& a, const QSeries& b);
  /// Same known coefficients below the shared truncation order.
  friend bool agree(const QSeries& a, const QSeries& b) { return !first_mismatch(a, b); }

  std::string to_string() const;
  nlohmann::json to_json() const;

 private:
  void normalize();
  void ensure_denom(long d);
  long local_index(long exponent) const { return exponent - min_exp_; }

  long denom_ = 1;
  long min_exp_ = 0;
  std::vector<Rational> coeffs_;
  long trunc_ = kExact;
};

QSeries pow(const QSeries& x, long n);
/// Multiplicative inverse. An exact non-monomial needs an explicit truncation order.
QSeries invert(const QSeries& x, std::optional<long> trunc = std::nullopt);
inline QSeries operator/(const QSeries& a, const QSeries& b) { return a * invert(b); }

/// Brings two series to a common exponent denominator.
long common_denom(const QSeries& a, const QSeries& b);

}  // namespace vnat
