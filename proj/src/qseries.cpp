#include "vnat/qseries.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "vnat/errors.hpp"

namespace vnat {
namespace {

long sat_add(long a, long b) {
  if (a >= QSeries::kExact || b >= QSeries::kExact) return QSeries::kExact;
  return std::min(a + b, QSeries::kExact);
}

struct SparseTerms {
  std::vector<long> exps;
  std::vector<const Rational*> vals;
};

SparseTerms sparse(const std::vector<std::pair<long, Rational>>& terms) {
  SparseTerms out;
  out.exps.reserve(terms.size());
  out.vals.reserve(terms.size());
  for (const auto& [e, c] : terms) {
    out.exps.push_back(e);
    out.vals.push_back(&c);
  }
  return out;
}

// Bit length bound for integral coefficients that fit in a signed 64-bit word;
// returns -1 otherwise.
int int64_bits(const std::vector<std::pair<long, Rational>>& terms) {
  int bits = 0;
  for (const auto& [e, c] : terms) {
    if (c.get_den() != 1 || !mpz_fits_slong_p(c.get_num_mpz_t())) return -1;
    bits = std::max(bits, static_cast<int>(mpz_sizeinbase(c.get_num_mpz_t(), 2)));
  }
  return bits;
}

int ceil_log2(std::size_t n) {
  int b = 0;
  while ((std::size_t{1} << b) < n) ++b;
  return b;
}

}  // namespace

Integer from_int128(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  const auto hi = static_cast<unsigned long>(u >> 64);
  const auto lo = static_cast<unsigned long>(u);
  Integer r = hi;
  r <<= 64;
  r += lo;
  return neg ? Integer(-r) : r;
}

QSeries QSeries::zero(long denom, long trunc) {
  if (denom <= 0) throw std::invalid_argument("series denominator must be positive");
  QSeries s;
  s.denom_ = denom;
  s.trunc_ = std::min(trunc, kExact);
  return s;
}

QSeries QSeries::constant(const Rational& c) { return monomial(c, 0, 1); }

QSeries QSeries::monomial(const Rational& c, long exponent, long denom) {
  QSeries s = zero(denom, kExact);
  if (c != 0) {
    s.min_exp_ = exponent;
    s.coeffs_.push_back(c);
  }
  return s;
}

QSeries QSeries::from_coeffs(long denom, long min_exp, std::vector<Rational> coeffs, long trunc) {
  QSeries s = zero(denom, trunc);
  s.min_exp_ = min_exp;
  s.coeffs_ = std::move(coeffs);
  s.normalize();
  return s;
}

void QSeries::normalize() {
  if (!is_exact() && end_exponent() > trunc_) {
    const long keep = std::max(0L, trunc_ - min_exp_);
    coeffs_.resize(static_cast<std::size_t>(keep));
  }
  std::size_t lead = 0;
  while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
  if (lead == coeffs_.size()) {
    coeffs_.clear();
    min_exp_ = 0;
    return;
  }
  std::size_t last = coeffs_.size();
  while (coeffs_[last - 1] == 0) --last;
  coeffs_.erase(coeffs_.begin() + static_cast<long>(last), coeffs_.end());
  coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
  min_exp_ += static_cast<long>(lead);
}

Rational QSeries::coeff(long exponent) const {
  if (exponent >= trunc_) {
    std::ostringstream msg;
    msg << "coefficient of q^(" << exponent << "/" << denom_ << ") requested at or beyond truncation q^("
        << trunc_ << "/" << denom_ << ")";
    throw TruncationError(msg.str());
  }
  const long i = local_index(exponent);
  if (i < 0 || i >= static_cast<long>(coeffs_.size())) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

Rational QSeries::coeff_at(const Rational& exponent) const {
  Rational scaled = exponent * denom_;
  if (scaled >= trunc_) {
    throw TruncationError("coefficient of q^(" + exponent.get_str() + ") requested beyond truncation");
  }
  if (scaled.get_den() != 1) return 0;
  return coeff(scaled.get_num().get_si());
}

std::vector<std::pair<long, Rational>> QSeries::terms() const {
  std::vector<std::pair<long, Rational>> out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0) out.emplace_back(min_exp_ + static_cast<long>(i), coeffs_[i]);
  }
  return out;
}

bool QSeries::is_integral() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.get_den() == 1; });
}

bool QSeries::exponents_divisible_by(long step) const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != 0 && mod(min_exp_ + static_cast<long>(i), step) != 0) return false;
  }
  return true;
}

QSeries QSeries::rescaled(long new_denom) const {
  if (new_denom <= 0 || new_denom % denom_ != 0) {
    throw std::invalid_argument("rescale target must be a positive multiple of the series denominator");
  }
  const long f = new_denom / denom_;
  if (f == 1) return *this;
  QSeries s = zero(new_denom, is_exact() ? kExact : trunc_ * f);
  if (coeffs_.empty()) return s;
  s.min_exp_ = min_exp_ * f;
  s.coeffs_.resize((coeffs_.size() - 1) * static_cast<std::size_t>(f) + 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) s.coeffs_[i * static_cast<std::size_t>(f)] = coeffs_[i];
  return s;
}

QSeries QSeries::truncated(long new_trunc) const {
  if (new_trunc > trunc_) throw std::invalid_argument("cannot extend a truncated series");
  QSeries s = *this;
  s.trunc_ = new_trunc;
  s.normalize();
  return s;
}

QSeries QSeries::shifted(long units) const {
  QSeries s = *this;
  if (!s.coeffs_.empty()) s.min_exp_ += units;
  if (!is_exact()) s.trunc_ += units;
  return s;
}

QSeries QSeries::dilated(long factor) const {
  if (factor <= 0) throw std::invalid_argument("dilation factor must be positive");
  QSeries s = zero(denom_, is_exact() ? kExact : trunc_ * factor);
  if (coeffs_.empty()) return s;
  s.min_exp_ = min_exp_ * factor;
  s.coeffs_.resize((coeffs_.size() - 1) * static_cast<std::size_t>(factor) + 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) s.coeffs_[i * static_cast<std::size_t>(factor)] = coeffs_[i];
  return s;
}

void QSeries::ensure_denom(long d) {
  if (d != denom_) *this = rescaled(d);
}

long common_denom(const QSeries& a, const QSeries& b) { return lcm(a.denom(), b.denom()); }

QSeries QSeries::operator-() const {
  QSeries s = *this;
  for (auto& c : s.coeffs_) c = -c;
  return s;
}

void QSeries::add_scaled(const QSeries& other, const Rational& scale) {
  const long d = common_denom(*this, other);
  ensure_denom(d);
  const QSeries rescaled_other = other.denom() == d ? QSeries() : other.rescaled(d);
  const QSeries* src = other.denom() == d ? &other : &rescaled_other;

  const long new_trunc = std::min(trunc_, src->trunc_);
  if (scale == 0 || src->coeffs_.empty()) {
    trunc_ = new_trunc;
    normalize();
    return;
  }
  long lo = src->min_exp_;
  long hi = src->end_exponent();
  if (!coeffs_.empty()) {
    lo = std::min(lo, min_exp_);
    hi = std::max(hi, end_exponent());
  }
  hi = std::min(hi, new_trunc);
  if (hi <= lo) {
    coeffs_.clear();
    trunc_ = new_trunc;
    normalize();
    return;
  }
  std::vector<Rational> out(static_cast<std::size_t>(hi - lo));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const long e = min_exp_ + static_cast<long>(i);
    if (e < hi) out[static_cast<std::size_t>(e - lo)] = coeffs_[i];
  }
  for (std::size_t i = 0; i < src->coeffs_.size(); ++i) {
    const long e = src->min_exp_ + static_cast<long>(i);
    if (e >= hi) break;
    if (src->coeffs_[i] != 0) out[static_cast<std::size_t>(e - lo)] += scale * src->coeffs_[i];
  }
  coeffs_ = std::move(out);
  min_exp_ = lo;
  trunc_ = new_trunc;
  normalize();
}

QSeries& QSeries::operator+=(const QSeries& other) {
  add_scaled(other, 1);
  return *this;
}

QSeries& QSeries::operator-=(const QSeries& other) {
  add_scaled(other, -1);
  return *this;
}

QSeries& QSeries::operator*=(const Rational& scalar) {
  if (scalar == 0) {
    coeffs_.clear();
    min_exp_ = 0;
    return *this;
  }
  for (auto& c : coeffs_) c *= scalar;
  return *this;
}

QSeries& QSeries::operator*=(const QSeries& other) {
  *this = *this * other;
  return *this;
}

QSeries operator*(const QSeries& x, const QSeries& y) {
  const long d = common_denom(x, y);
  const QSeries a = x.rescaled(d);
  const QSeries b = y.rescaled(d);
  const long va = a.valuation();
  const long vb = b.valuation();
  long t = std::min(sat_add(a.trunc_, vb), sat_add(b.trunc_, va));
  if (a.coeffs_.empty() || b.coeffs_.empty()) return QSeries::zero(d, t);

  long hi = a.end_exponent() + b.end_exponent() - 1;
  if (t < QSeries::kExact) hi = std::min(hi, t);
  const long lo = va + vb;
  if (hi <= lo) return QSeries::zero(d, t);

  const auto ta = a.terms();
  const auto tb = b.terms();
  const auto sa = sparse(ta);
  const auto sb = sparse(tb);
  const std::size_t width = static_cast<std::size_t>(hi - lo);
  std::vector<Rational> out(width);

  const int bits_a = int64_bits(ta);
  const int bits_b = int64_bits(tb);
  if (bits_a >= 0 && bits_b >= 0 &&
      bits_a + bits_b + ceil_log2(std::min(ta.size(), tb.size()) + 1) < 125) {
    std::vector<__int128> acc(width, 0);
    std::vector<long> vb64(tb.size());
    for (std::size_t j = 0; j < tb.size(); ++j) vb64[j] = sb.vals[j]->get_num().get_si();
    for (std::size_t i = 0; i < ta.size(); ++i) {
      const __int128 ci = sa.vals[i]->get_num().get_si();
      const long base = sa.exps[i] - lo;
      for (std::size_t j = 0; j < tb.size(); ++j) {
        const long idx = base + sb.exps[j];
        if (idx >= static_cast<long>(width)) break;
        acc[static_cast<std::size_t>(idx)] += ci * vb64[j];
      }
    }
    for (std::size_t i = 0; i < width; ++i) {
      if (acc[i] != 0) out[i] = Rational(from_int128(acc[i]));
    }
  } else {
    for (std::size_t i = 0; i < ta.size(); ++i) {
      const long base = sa.exps[i] - lo;
      for (std::size_t j = 0; j < tb.size(); ++j) {
        const long idx = base + sb.exps[j];
        if (idx >= static_cast<long>(width)) break;
        out[static_cast<std::size_t>(idx)] += *sa.vals[i] * *sb.vals[j];
      }
    }
  }
  return QSeries::from_coeffs(d, lo, std::move(out), t);
}

QSeries pow(const QSeries& x, long n) {
  if (n < 0) return pow(invert(x), -n);
  QSeries result = QSeries::constant(1).rescaled(x.denom());
  QSeries base = x;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

QSeries invert(const QSeries& x, std::optional<long> trunc) {
  if (x.is_zero()) throw std::domain_error("cannot invert a series whose known coefficients all vanish");
  const auto t = x.terms();
  const long lead = t.front().first;
  const Rational c = t.front().second;
  if (x.is_exact() && t.size() == 1) return QSeries::monomial(1 / c, -lead, x.denom());

  long target;
  if (x.is_exact()) {
    if (!trunc) throw std::invalid_argument("inverting an exact polynomial needs a truncation order");
    target = *trunc;
  } else {
    target = x.trunc() - 2 * lead;
    if (trunc) target = std::min(target, *trunc);
  }
  const long n = target + lead;  // relative length
  if (n <= 0) return QSeries::zero(x.denom(), target);

  std::vector<std::pair<long, Rational>> rel;
  for (const auto& [e, v] : t) {
    if (e - lead < n) rel.emplace_back(e - lead, v);
  }
  std::vector<Rational> y(static_cast<std::size_t>(n));
  const bool unit = (c == 1 || c == -1) &&
                    std::all_of(rel.begin(), rel.end(), [](const auto& p) { return p.second.get_den() == 1; });
  if (unit) {
    std::vector<Integer> yi(static_cast<std::size_t>(n));
    const Integer ci = c.get_num();
    yi[0] = ci;  // 1/c == c for c = +-1
    std::vector<std::pair<long, Integer>> reli;
    for (std::size_t j = 1; j < rel.size(); ++j) reli.emplace_back(rel[j].first, rel[j].second.get_num());
    Integer acc;
    for (long m = 1; m < n; ++m) {
      acc = 0;
      for (const auto& [e, v] : reli) {
        if (e > m) break;
        if (yi[static_cast<std::size_t>(m - e)] != 0) acc += v * yi[static_cast<std::size_t>(m - e)];
      }
      yi[static_cast<std::size_t>(m)] = -ci * acc;
    }
    for (long m = 0; m < n; ++m) y[static_cast<std::size_t>(m)] = Rational(yi[static_cast<std::size_t>(m)]);
  } else {
    const Rational inv = 1 / c;
    y[0] = inv;
    Rational acc;
    for (long m = 1; m < n; ++m) {
      acc = 0;
      for (std::size_t j = 1; j < rel.size(); ++j) {
        const long e = rel[j].first;
        if (e > m) break;
        acc += rel[j].second * y[static_cast<std::size_t>(m - e)];
      }
      y[static_cast<std::size_t>(m)] = -inv * acc;
    }
  }
  return QSeries::from_coeffs(x.denom(), -lead, std::move(y), target);
}

std::optional<SeriesMismatch> first_mismatch(const QSeries& x, const QSeries& y) {
  const long d = common_denom(x, y);
  const QSeries a = x.rescaled(d);
  const QSeries b = y.rescaled(d);
  const long t = std::min(a.trunc(), b.trunc());
  long lo = std::min(a.valuation(), b.valuation());
  long hi = std::max(a.end_exponent(), b.end_exponent());
  if (a.is_zero()) hi = b.end_exponent();
  if (b.is_zero()) hi = a.end_exponent();
  hi = std::min(hi, t);
  for (long e = lo; e < hi; ++e) {
    Rational ca = a.coeff(e);
    Rational cb = b.coeff(e);
    if (ca != cb) return SeriesMismatch{d, e, ca, cb};
  }
  return std::nullopt;
}

std::string QSeries::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms()) {
    if (!first) out << " + ";
    first = false;
    const Rational ex = make_rational(e, denom_);
    out << c.get_str() << " q^(" << ex.get_num().get_str() << "/" << ex.get_den().get_str() << ")";
  }
  if (!is_exact()) {
    if (!first) out << " + ";
    const Rational ex = make_rational(trunc_, denom_);
    out << "O(q^(" << ex.get_num().get_str() << "/" << ex.get_den().get_str() << "))";
  } else if (first) {
    out << "0";
  }
  return out.str();
}

nlohmann::json QSeries::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [e, c] : terms()) {
    const Rational ex = make_rational(e, denom_);
    arr.push_back({{"num", ex.get_num().get_si()}, {"den", ex.get_den().get_si()}, {"coeff", c.get_str()}});
  }
  return arr;
}

}  // namespace vnat
