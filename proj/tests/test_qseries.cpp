#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "vnat/errors.hpp"
#include "vnat/special_series.hpp"

using namespace vnat;
namespace S = vnat::series;

namespace {

QSeries poly(std::initializer_list<long> coeffs, long denom = 1, long trunc = QSeries::kExact) {
  std::vector<Rational> c;
  for (long v : coeffs) c.emplace_back(v);
  return QSeries::from_coeffs(denom, 0, std::move(c), trunc);
}

QSeries random_series(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> denom_pick(0, 3), len(0, 8), val(-9, 9), den(1, 4), lead(-3, 3), slack(0, 6);
  const long denoms[] = {1, 2, 3, 4};
  const long d = denoms[denom_pick(rng)];
  const long start = lead(rng);
  std::vector<Rational> c;
  const long n = len(rng);
  for (long i = 0; i < n; ++i) c.push_back(make_rational(val(rng), den(rng)));
  if (!c.empty() && c[0] == 0) c[0] = 1;
  return QSeries::from_coeffs(d, start, std::move(c), start + n + slack(rng) + 1);
}

}  // namespace

TEST_CASE("ring operations on small polynomials") {
  CHECK(agree(poly({1, 1}) * poly({1, -1}), poly({1, 0, -1})));
  CHECK((poly({1, 1}) * poly({1, -1})).terms().size() == 2);
  const QSeries x = poly({2, 3, 5}, 1, 6);
  CHECK(agree(pow(x, 0), QSeries::constant(1)));
  CHECK(agree(x * invert(x), QSeries::constant(1)));
}

TEST_CASE("truncation is tracked and never extended") {
  const QSeries x = poly({1, 2, 3}, 1, 3);
  CHECK(x.coeff(2) == 3);
  CHECK_THROWS_AS(x.coeff(3), TruncationError);
  CHECK_THROWS_AS((void)x.truncated(5), std::invalid_argument);
  // (1 + q^2 O) * q: product of a valuation-1 exact monomial with a series known below q^3
  const QSeries prod = x * QSeries::monomial(1, 1, 1);
  CHECK(prod.trunc() == 4);
  // sum trunc is the smaller one
  CHECK((x + poly({1}, 1, 7)).trunc() == 3);
  // inverse of q^2(1 + ...) known below q^5 is known below q^1
  const QSeries y = QSeries::from_coeffs(1, 2, {Rational(1), Rational(1)}, 5);
  CHECK(invert(y).trunc() == 1);
  CHECK(invert(y).valuation() == -2);
}

TEST_CASE("invert and pow error paths") {
  CHECK_THROWS_AS(invert(QSeries::zero(1, 5)), std::domain_error);
  CHECK_THROWS_AS(pow(QSeries::zero(1, 5), -1), std::domain_error);
  CHECK_THROWS_AS(invert(poly({1, 1})), std::invalid_argument);  // exact non-monomial without order
  CHECK(agree(invert(poly({1, 1}), 6), poly({1, -1, 1, -1, 1, -1}, 1, 6)));
}

TEST_CASE("invert(phi) gives partition numbers") {
  const QSeries p = invert(S::phi(1, Precision{1, 6}));
  for (long n = 0; n <= 5; ++n) CHECK(p.coeff(n) == oracle::count_partitions(n, n));
  // frozen: 1 + q + 2q^2 + 3q^3 + 5q^4 + 7q^5
  CHECK(agree(p, poly({1, 1, 2, 3, 5, 7}, 1, 6)));
}

TEST_CASE("phi matches direct product expansion") {
  const auto ref = oracle::euler_product(40);
  const QSeries p = S::phi(1, Precision{1, 40});
  for (long n = 0; n < 40; ++n) CHECK(p.coeff(n) == Rational(ref[static_cast<std::size_t>(n)]));
  CHECK(agree(S::phi(1, Precision{1, 13}), poly({1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1}, 1, 13)));

  // phi(q^{1/2}) on the 1/2 grid is the same product rescaled
  const QSeries half = S::phi(make_rational(1, 2), Precision{2, 40});
  CHECK(half.denom() == 2);
  CHECK(half.valuation() == 0);
  for (long n = 0; n < 40; ++n) CHECK(half.coeff(n) == Rational(ref[static_cast<std::size_t>(n)]));

  const QSeries four = S::phi(4, Precision{1, 40});
  const auto ref4 = oracle::euler_product(40, 4);
  for (long n = 0; n < 40; ++n) CHECK(four.coeff(n) == Rational(ref4[static_cast<std::size_t>(n)]));
  for (Rational s : {make_rational(1, 2), Rational(1), Rational(2), Rational(4)}) {
    CHECK(S::phi(s, Precision{48, 480}).coeff(0) == 1);
  }
}

TEST_CASE("eta leading exponents and Delta") {
  const Precision p{48, 48 * 6};
  const QSeries e = S::eta(1, p);
  CHECK(e.valuation() == 2);  // 1/24 on the 1/48 grid
  CHECK(make_rational(e.valuation(), e.denom()) == make_rational(1, 24));

  const QSeries quotient = pow(S::eta(2, p), 48) * pow(invert(S::eta(1, p)), 24) * pow(invert(S::eta(4, p)), 24);
  CHECK(make_rational(quotient.valuation(), quotient.denom()) == -1);

  const QSeries delta = pow(S::eta(1, Precision{24, 24 * 8}), 24);
  const auto ref = oracle::power(oracle::euler_product(8), 24);
  CHECK(make_rational(delta.valuation(), delta.denom()) == 1);
  for (long n = 1; n < 8; ++n) CHECK(delta.coeff(24 * n) == Rational(ref[static_cast<std::size_t>(n - 1)]));
}

TEST_CASE("coset theta characters a_i") {
  for (long k : {2, 3, 4, 5}) {
    const Precision p{S::pipeline_denom(k), S::pipeline_denom(k) * 6};
    for (long i = 0; i <= k; ++i) {
      const QSeries a = S::theta_a(k, i, p);
      CHECK(make_rational(a.valuation(), a.denom()) == make_rational(i * i, 4 * k));
      CHECK(agree(a, S::theta_a(k, 2 * k - i, p)));
      CHECK(agree(a, S::theta_a(k, -i, p)));
    }
  }
  // k = 2: (1 + 2q^2 + 2q^8 + ...) times the partition series
  oracle::Poly theta(4);
  theta[0] = 1;
  theta[2] = 2;
  const auto expected = oracle::mul(theta, oracle::inverse(oracle::euler_product(4)));
  const QSeries a0 = S::theta_a(2, 0, Precision{1, 4});
  for (long n = 0; n < 4; ++n) CHECK(a0.coeff(n) == Rational(expected[static_cast<std::size_t>(n)]));
  CHECK(agree(a0, poly({1, 1, 4, 5}, 1, 4)));
}

TEST_CASE("series b from both definitions") {
  const Precision p{48, 48 * 60};
  const QSeries b = S::series_b(p);
  CHECK(b.coeff(0) == 1);
  CHECK(agree(b * S::phi(2, p), S::phi(1, p)));
  for (long k : {2, 3, 4, 5}) {
    const QSeries z = S::half_shift_alternating_theta(k, Precision{S::pipeline_denom(k), 60 * S::pipeline_denom(k)});
    CHECK(z.is_zero());
    CHECK(z.trunc() == 60 * S::pipeline_denom(k));
  }
}

TEST_CASE("twisted characters") {
  const Precision p{48, 48 * 11};
  const auto tw = S::twisted_chars(p);
  const QSeries f24 = pow(tw.f, 24);
  CHECK(make_rational(f24.valuation(), f24.denom()) == make_rational(3, 2));
  const QSeries plus = (tw.f + tw.g) * make_rational(1, 2);
  const QSeries minus = (tw.f - tw.g) * make_rational(1, 2);
  for (const QSeries* s : {&plus, &minus}) {
    CHECK(s->is_integral());
    for (const auto& [e, c] : s->terms()) CHECK(c > 0);
  }
  CHECK(agree((f24 - pow(tw.g, 24)) * Rational(2048), S::twisted_closed_form(p)));
}

TEST_CASE("j oracle") {
  const Precision p = Precision::through_order(1, 4);
  const QSeries j = S::j_oracle(p);
  CHECK(j.is_integral());

  // independent expansion: E4^3 / (q phi^24)
  const std::size_t n = 7;
  oracle::Poly e4(n);
  e4[0] = 1;
  for (std::size_t m = 1; m < n; ++m) e4[m] = 240 * oracle::sigma3(static_cast<long>(m));
  const auto ratio = oracle::mul(oracle::power(e4, 3), oracle::inverse(oracle::power(oracle::euler_product(n), 24)));
  // ratio[m] is the coefficient of q^{m-1} in E4^3/Delta
  CHECK(j.coeff(-1) == Rational(ratio[0]));
  CHECK(j.coeff(0) == Rational(ratio[1] - 744));
  CHECK(j.coeff(1) == Rational(ratio[2]));
  CHECK(j.coeff(2) == Rational(ratio[3]));
  CHECK(j.coeff(-1) == 1);
  CHECK(j.coeff(0) == 0);
  CHECK(j.coeff(1) == 196884);
  CHECK(j.coeff(2) == 21493760);
  CHECK_THROWS_AS(j.coeff(5), TruncationError);
}

TEST_CASE("4A eta quotient starts q^-1 + 0") {
  const QSeries t = S::eta_quotient_4a(Precision::through_order(1, 6));
  CHECK(t.coeff(-1) == 1);
  CHECK(t.coeff(0) == 0);
  CHECK(t.is_integral());
}

TEST_CASE("rendering") {
  const QSeries x = QSeries::from_coeffs(2, -1, {Rational(3), Rational(0), make_rational(-1, 2)}, 4);
  CHECK(x.to_string() == "3 q^(-1/2) + -1/2 q^(1/2) + O(q^(2/1))");
  const auto js = x.to_json();
  REQUIRE(js.size() == 2);
  CHECK(js[0]["num"] == -1);
  CHECK(js[0]["den"] == 2);
  CHECK(js[1]["coeff"] == "-1/2");
}

TEST_CASE("ring axioms on random truncated series") {
  std::mt19937_64 rng(20241016);
  for (int trial = 0; trial < 200; ++trial) {
    const QSeries a = random_series(rng), b = random_series(rng), c = random_series(rng);
    CHECK(agree(a * b, b * a));
    CHECK(agree(a + b, b + a));
    CHECK(agree((a * b) * c, a * (b * c)));
    CHECK(agree(a * (b + c), a * b + a * c));
    CHECK(agree((a + b) + c, a + (b + c)));
    CHECK(agree(a - a, QSeries::zero(a.denom(), a.trunc())));
    if (!a.is_zero()) {
      CHECK(agree(a * invert(a), QSeries::constant(1)));
      CHECK(agree(invert(a) * a, QSeries::constant(1)));
    }
    const QSeries r = a.rescaled(a.denom() * 3);
    CHECK(r.trunc() == a.trunc() * 3);
    for (const auto& [e, v] : a.terms()) CHECK(r.coeff(3 * e) == v);
    CHECK(agree(r, a));
  }
}
