#include "vnat/special_series.hpp"

#include <stdexcept>

#include "vnat/errors.hpp"

namespace vnat::series {
namespace {

long units_of(const Rational& exponent, long denom, const char* what) {
  Rational u = exponent * denom;
  if (u.get_den() != 1) {
    throw std::invalid_argument(std::string(what) + ": exponent " + exponent.get_str() +
                                " is not on the 1/" + std::to_string(denom) + " grid");
  }
  return u.get_num().get_si();
}

void require_consistent(const QSeries& a, const QSeries& b, const char* what) {
  if (auto mm = first_mismatch(a, b)) {
    throw InconsistencyError(std::string(what) + ": routes disagree at q^(" + mm->exponent_value().get_str() +
                             "): " + mm->lhs.get_str() + " vs " + mm->rhs.get_str());
  }
}

}  // namespace

long pipeline_denom(long k) { return lcm(48, 4 * k); }

QSeries phi(const Rational& scale, const Precision& prec) {
  if (scale <= 0) throw std::invalid_argument("phi: scale must be positive");
  const long step = units_of(scale, prec.denom, "phi");
  // Euler's pentagonal number theorem: sum_m (-1)^m q^{m(3m-1)/2}.
  std::vector<Rational> c(static_cast<std::size_t>(std::max(prec.trunc, 0L)));
  if (!c.empty()) c[0] = 1;
  for (long m = 1;; ++m) {
    const long lo = step * (m * (3 * m - 1) / 2);
    const long hi = step * (m * (3 * m + 1) / 2);
    if (lo >= prec.trunc) break;
    const int sign = (m % 2 == 0) ? 1 : -1;
    c[static_cast<std::size_t>(lo)] = sign;
    if (hi < prec.trunc) c[static_cast<std::size_t>(hi)] = sign;
  }
  return QSeries::from_coeffs(prec.denom, 0, std::move(c), prec.trunc);
}

QSeries eta(const Rational& scale, const Precision& prec) {
  const long shift = units_of(scale / 24, prec.denom, "eta");
  return phi(scale, prec.shifted(-shift)).shifted(shift);
}

QSeries coset_theta(long k, long i, const Precision& prec) {
  if (k < 1) throw std::invalid_argument("coset_theta: k must be positive");
  const long n = 2 * k;
  long r = mod(i, n);
  if (r > k) r = n - r;
  std::vector<Rational> c(static_cast<std::size_t>(std::max(prec.trunc, 0L)));
  auto exponent = [&](long j) {
    const long x = n * j + r;
    return units_of(make_rational(x * x, 4 * k), prec.denom, "coset_theta");
  };
  for (long dir : {1L, -1L}) {
    for (long j = (dir == 1 ? 0 : -1);; j += dir) {
      const long e = exponent(j);
      if (e >= prec.trunc) break;
      c[static_cast<std::size_t>(e)] += 1;
    }
  }
  return QSeries::from_coeffs(prec.denom, 0, std::move(c), prec.trunc);
}

QSeries theta_a(long k, long i, const Precision& prec) {
  return coset_theta(k, i, prec) * invert(phi(1, prec));
}

QSeries alternating_theta(const Precision& prec) {
  std::vector<Rational> c(static_cast<std::size_t>(std::max(prec.trunc, 0L)));
  for (long j = 0;; ++j) {
    const long e = j * j * prec.denom;
    if (e >= prec.trunc) break;
    c[static_cast<std::size_t>(e)] += (j == 0 ? 1 : 2) * (j % 2 == 0 ? 1 : -1);
  }
  return QSeries::from_coeffs(prec.denom, 0, std::move(c), prec.trunc);
}

QSeries half_shift_alternating_theta(long k, const Precision& prec) {
  std::vector<Rational> c(static_cast<std::size_t>(std::max(prec.trunc, 0L)));
  // k (j + 1/2)^2 = k (2j + 1)^2 / 4
  for (long dir : {1L, -1L}) {
    for (long j = (dir == 1 ? 0 : -1);; j += dir) {
      const long x = 2 * j + 1;
      const long e = units_of(make_rational(k * x * x, 4), prec.denom, "half_shift_alternating_theta");
      if (e >= prec.trunc) break;
      c[static_cast<std::size_t>(e)] += (mod(j, 2) == 0 ? 1 : -1);
    }
  }
  return QSeries::from_coeffs(prec.denom, 0, std::move(c), prec.trunc);
}

QSeries series_b(const Precision& prec) {
  const QSeries inv_phi = invert(phi(1, prec));
  QSeries from_theta = alternating_theta(prec) * inv_phi;
  QSeries closed = phi(1, prec) * invert(phi(2, prec));
  require_consistent(from_theta, closed, "series_b");
  return from_theta;
}

QSeries twisted_closed_form(const Precision& prec) {
  const long shift = units_of(make_rational(3, 2), prec.denom, "twisted_closed_form");
  const Precision inner = prec.shifted(-shift);
  const QSeries p1 = phi(1, inner);
  const QSeries ph = phi(make_rational(1, 2), inner);
  const QSeries p2 = phi(2, inner);
  const QSeries first = pow(p1, 24) * pow(invert(ph), 24);
  const QSeries second = pow(p2, 24) * pow(ph, 24) * pow(invert(p1), 48);
  return ((first - second) * Rational(2048)).shifted(shift);
}

TwistedPair twisted_chars(const Precision& prec) {
  const long shift = units_of(make_rational(1, 16), prec.denom, "twisted_chars");
  const Precision inner = prec.shifted(-shift);
  const QSeries p1 = phi(1, inner);
  const QSeries ph = phi(make_rational(1, 2), inner);
  const QSeries p2 = phi(2, inner);
  const QSeries inv_p1 = invert(p1);
  TwistedPair out{(p1 * invert(ph)).shifted(shift), (ph * p2 * inv_p1 * inv_p1).shifted(shift)};
  const QSeries aggregate = (pow(out.f, 24) - pow(out.g, 24)) * Rational(2048);
  require_consistent(aggregate, twisted_closed_form(prec), "twisted_chars");
  return out;
}

QSeries eisenstein_e4(const Precision& prec) {
  std::vector<Rational> c(static_cast<std::size_t>(std::max(prec.trunc, 0L)));
  if (!c.empty()) c[0] = 1;
  for (long n = 1; n * prec.denom < prec.trunc; ++n) {
    Integer sigma3 = 0;
    for (long d = 1; d <= n; ++d) {
      if (n % d == 0) sigma3 += Integer(d) * d * d;
    }
    c[static_cast<std::size_t>(n * prec.denom)] = Rational(240 * sigma3);
  }
  return QSeries::from_coeffs(prec.denom, 0, std::move(c), prec.trunc);
}

QSeries j_oracle(const Precision& prec) {
  const long d = prec.denom;
  const QSeries e4 = eisenstein_e4(prec.shifted(d));
  const QSeries delta = pow(phi(1, prec.shifted(d)), 24).shifted(d);
  QSeries j = pow(e4, 3) * invert(delta);
  j -= QSeries::constant(744);
  return j.truncated(std::min(j.trunc(), prec.trunc));
}

QSeries eta_quotient_4a(const Precision& prec) {
  const long d = prec.denom;
  const Precision inner = prec.shifted(d);
  const QSeries p1 = phi(1, inner);
  const QSeries p2 = phi(2, inner);
  const QSeries p4 = phi(4, inner);
  QSeries q = (pow(p2, 48) * pow(invert(p1), 24) * pow(invert(p4), 24)).shifted(-d);
  q -= QSeries::constant(24);
  return q;
}

}  // namespace vnat::series
