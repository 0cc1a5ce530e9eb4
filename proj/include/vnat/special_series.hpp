#pragma once

#include "vnat/qseries.hpp"

namespace vnat::series {

/// Shared exponent denominator for a pipeline at level k: lcm(48, 4k).
long pipeline_denom(long k);

/// phi(q^s) = prod_{n>=1} (1 - q^{s n}), expanded through the given precision.
/// Requires s * denom to be an integer.
QSeries phi(const Rational& scale, const Precision& prec);

/// eta(q^s) = q^{s/24} phi(q^s).
QSeries eta(const Rational& scale, const Precision& prec);

/// sum_{j in Z} q^{(2kj + i)^2 / 4k}: the theta series of the coset i*alpha/2k + Z alpha.
QSeries coset_theta(long k, long i, const Precision& prec);

/// a_i = coset_theta(k, i) / phi(q), the character of V_{i alpha/2k + L}.
/// Any integer i is accepted and reduced to its class in [0, k].
QSeries theta_a(long k, long i, const Precision& prec);

/// sum_j (-1)^j q^{j^2}.
QSeries alternating_theta(const Precision& prec);

/// sum_j (-1)^j q^{k (j + 1/2)^2}; vanishes identically.
QSeries half_shift_alternating_theta(long k, const Precision& prec);

/// ch V_L^+ - ch V_L^-. Computed as alternating_theta / phi(q) and as
/// phi(q) / phi(q^2); throws InconsistencyError if the two disagree.
QSeries series_b(const Precision& prec);

struct TwistedPair {
  QSeries f;  // q^{1/16} phi(q) / phi(q^{1/2})
  QSeries g;  // q^{1/16} phi(q^{1/2}) phi(q^2) / phi(q)^2
};

/// Characters of one rank-one twisted sector (f) and its +/- difference (g).
/// Checks 2^11 (f^24 - g^24) against the 24-fold closed form and throws
/// InconsistencyError on disagreement.
TwistedPair twisted_chars(const Precision& prec);

/// 2^11 q^{3/2} (phi(q)^24 / phi(q^{1/2})^24 - phi(q^2)^24 phi(q^{1/2})^24 / phi(q)^48).
QSeries twisted_closed_form(const Precision& prec);

/// E_4(q) = 1 + 240 sum sigma_3(n) q^n.
QSeries eisenstein_e4(const Precision& prec);

/// J(q) - 744 = E_4^3 / Delta - 744, with Delta = q phi(q)^24.
QSeries j_oracle(const Precision& prec);

/// eta(q^2)^48 / (eta(q)^24 eta(q^4)^24) - 24.
QSeries eta_quotient_4a(const Precision& prec);

}  // namespace vnat::series
