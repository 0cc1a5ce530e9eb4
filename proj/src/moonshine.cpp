#include "vnat/moonshine.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <sstream>

#include "vnat/errors.hpp"
#include "vnat/special_series.hpp"

namespace vnat {
namespace {

using Kind = IrrepLabel::Kind;
namespace S = series;

void require_agree(const QSeries& a, const QSeries& b, const std::string& what) {
  if (const auto mm = first_mismatch(a, b)) {
    throw InconsistencyError(what + " disagree at q^" + to_string(mm->exponent_value()) + ": " + to_string(mm->lhs) +
                             " vs " + to_string(mm->rhs));
  }
}

// Memoized powers x^0 .. x^n of one base series.
class PowerTable {
 public:
  PowerTable(QSeries base, long n, long trunc) : pows_{QSeries::constant(1).truncated(trunc)} {
    for (long e = 1; e <= n; ++e) pows_.push_back(pows_.back() * base);
  }
  const QSeries& operator[](int e) const { return pows_[static_cast<std::size_t>(e)]; }

 private:
  std::vector<QSeries> pows_;
};

// Prod_t base_t^{n_t} for a composition.
QSeries composition_product(const std::vector<PowerTable>& pw, const Composition& comp, long trunc) {
  QSeries out = QSeries::constant(1).truncated(trunc);
  for (std::size_t t = 0; t < comp.size(); ++t) {
    if (comp[t] != 0) out *= pw[t][comp[t]];
  }
  return out;
}

std::string labels_of(long k, const Composition& comp) {
  std::string s;
  for (std::size_t t = 0; t < comp.size(); ++t) {
    if (comp[t] == 0) continue;
    if (!s.empty()) s += " ";
    const long r = static_cast<long>(t);
    std::string name = r == 0 ? "V+|V-" : r == k ? "Vhalf+|Vhalf-" : IrrepLabel::vr(k, r).to_string();
    s += name + "^" + std::to_string(comp[t]);
  }
  return s;
}

}  // namespace

IrrepLabel IrrepLabel::vr(long k, long r) {
  long x = mod(r, 2 * k);
  if (x > k) x = 2 * k - x;
  if (x == 0 || x == k) throw std::invalid_argument("IrrepLabel::vr: residue " + std::to_string(r) + " splits into +/- labels");
  return IrrepLabel{Kind::Vr, x};
}

std::string IrrepLabel::to_string() const {
  switch (kind) {
    case Kind::Vplus: return "V+";
    case Kind::Vminus: return "V-";
    case Kind::VhalfPlus: return "Vhalf+";
    case Kind::VhalfMinus: return "Vhalf-";
    case Kind::Vr: return "V_" + std::to_string(r);
    case Kind::T0plus: return "T0+";
    case Kind::T0minus: return "T0-";
    case Kind::T1plus: return "T1+";
    case Kind::T1minus: return "T1-";
  }
  return "?";
}

std::string Unit4::to_string() const {
  static const char* names[] = {"1", "i", "-1", "-i"};
  return names[e];
}

Unit4 mu_k(long k, const IrrepLabel& label) {
  if (k < 2) throw std::invalid_argument("mu_k: k must be at least 2");
  const bool odd = k % 2 == 1;
  switch (label.kind) {
    case Kind::Vplus:
    case Kind::Vminus: return Unit4{0};
    case Kind::VhalfPlus:
    case Kind::VhalfMinus: return Unit4{odd ? 2 : 0};
    case Kind::Vr: return Unit4{odd && label.r % 2 == 1 ? 2 : 0};
    case Kind::T0plus:
    case Kind::T0minus: return Unit4{odd ? 1 : 2};
    case Kind::T1plus:
    case Kind::T1minus: return Unit4{odd ? 3 : 2};
  }
  return Unit4{0};
}

QSeries char_of_label(long k, const IrrepLabel& label, const Precision& prec) {
  const Rational half = make_rational(1, 2);
  switch (label.kind) {
    case Kind::Vplus:
    case Kind::Vminus: {
      const QSeries a0 = S::theta_a(k, 0, prec);
      const QSeries b = S::series_b(prec);
      return (label.kind == Kind::Vplus ? a0 + b : a0 - b) * half;
    }
    case Kind::VhalfPlus:
    case Kind::VhalfMinus: {
      const QSeries ak = S::theta_a(k, k, prec);
      const QSeries corr = S::half_shift_alternating_theta(k, prec) * invert(S::phi(1, prec));
      return (label.kind == Kind::VhalfPlus ? ak + corr : ak - corr) * half;
    }
    case Kind::Vr: return S::theta_a(k, label.r, prec);
    case Kind::T0plus:
    case Kind::T1plus:
    case Kind::T0minus:
    case Kind::T1minus: {
      const auto tw = S::twisted_chars(prec);
      const bool plus = label.kind == Kind::T0plus || label.kind == Kind::T1plus;
      return (plus ? tw.f + tw.g : tw.f - tw.g) * half;
    }
  }
  return QSeries();
}

IrrepLabel untwisted_label(long k, long entry) {
  const long r = residue_type(entry, 2 * k);
  if (r == 0) return IrrepLabel{Kind::Vplus, 0};
  if (r == k) return IrrepLabel{Kind::VhalfPlus, 0};
  return IrrepLabel::vr(k, r);
}

Word pair_representative(const Word& c, long modulus) {
  Word a(c.size()), b(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    a[i] = mod(c[i], modulus);
    b[i] = mod(-c[i], modulus);
  }
  return std::min(a, b);
}

std::string to_string(LineKind kind) {
  switch (kind) {
    case LineKind::UntwistedC2: return "untwisted-C2";
    case LineKind::UntwistedPair: return "untwisted-pair";
    case LineKind::Twisted: return "twisted";
  }
  return "?";
}

Precision table_precision(long k, long order) { return Precision::through_order(S::pipeline_denom(k), order + 1); }

Integer SummandTable::untwisted_lines() const {
  Integer n = 0;
  for (const auto& g : groups) n += g.kind == LineKind::Twisted ? Integer(0) : g.lines;
  return n;
}

Integer SummandTable::twisted_lines() const {
  Integer n = 0;
  for (const auto& g : groups) n += g.kind == LineKind::Twisted ? g.lines : Integer(0);
  return n;
}

Integer SummandTable::twisted_multiplicity_total() const {
  Integer n = 0;
  for (const auto& g : groups) n += g.kind == LineKind::Twisted ? Integer(g.lines * g.multiplicity) : Integer(0);
  return n;
}

nlohmann::json SummandTable::to_json() const {
  nlohmann::json gs = nlohmann::json::array();
  for (const auto& g : groups) {
    nlohmann::json j{{"kind", to_string(g.kind)},
                     {"lines", g.lines.get_str()},
                     {"multiplicity", g.multiplicity.get_str()},
                     {"character", g.character.to_json()}};
    if (g.kind == LineKind::Twisted) {
      j["labels"] = "T0-|T1- ^24";
    } else {
      j["composition"] = g.composition;
      j["labels"] = labels_of(k, g.composition);
    }
    gs.push_back(std::move(j));
  }
  return {{"k", k},
          {"length", length},
          {"m", m},
          {"code_card", code_card.get_str()},
          {"untwisted_lines", untwisted_lines().get_str()},
          {"twisted_lines", twisted_lines().get_str()},
          {"twisted_multiplicity_each", groups.empty() ? "0" : groups.back().multiplicity.get_str()},
          {"twisted_multiplicity_total", twisted_multiplicity_total().get_str()},
          {"groups", gs},
          {"untwisted", untwisted.to_json()},
          {"twisted", twisted.to_json()},
          {"total", total.to_json()}};
}

std::string SummandTable::to_table() const {
  std::ostringstream os;
  os << "k=" << k << " m=" << m << " |C|=" << code_card << " untwisted lines=" << untwisted_lines()
     << " twisted lines=" << twisted_lines() << " twisted multiplicity total=" << twisted_multiplicity_total() << "\n";
  os << std::left << std::setw(16) << "kind" << std::setw(28) << "composition" << std::right << std::setw(14) << "lines"
     << std::setw(8) << "mult" << "  leading term\n";
  for (const auto& g : groups) {
    std::string comp = "-";
    if (g.kind != LineKind::Twisted) {
      comp.clear();
      for (std::size_t t = 0; t < g.composition.size(); ++t) comp += (t ? "," : "") + std::to_string(g.composition[t]);
    }
    std::string lead = "0";
    if (!g.character.is_zero()) {
      const long v = g.character.valuation();
      lead = to_string(g.character.coeff(v)) + " q^" + to_string(make_rational(v, g.character.denom()));
    }
    os << std::left << std::setw(16) << to_string(g.kind) << std::setw(28) << comp << std::right << std::setw(14)
       << g.lines << std::setw(8) << g.multiplicity << "  " << lead << "\n";
  }
  return os.str();
}

SummandTable decompose(const ZkCode& c, const SweHistogram& swe, const Precision& prec) {
  const long k = c.k();
  if (c.length() != 24) throw InputNotExtremal("decompose: code length is " + std::to_string(c.length()) + ", expected 24");
  const TypeIIReport rep = verify_type_ii(c);
  if (!rep.type_ii) throw InputNotExtremal("decompose: code is not Type II: " + rep.witness);
  if (swe.k != k || swe.length != 24 || swe.total() != c.card()) {
    throw std::invalid_argument("decompose: histogram does not belong to this code");
  }
  const auto min_w = swe.min_nonzero_weight();
  if (!min_w || *min_w != 8 * k) {
    throw InputNotExtremal("decompose: minimum Euclidean weight is " + (min_w ? std::to_string(*min_w) : "undefined") +
                           ", extremal needs " + std::to_string(8 * k));
  }

  SummandTable t;
  t.k = k;
  t.length = 24;
  t.code_card = c.card();
  t.prec = prec;
  t.swe = swe;
  const C2Analysis c2 = c2_analysis(c);
  t.m = c2.m;
  if (t.m < 12) throw InconsistencyError("decompose: dim C2 = " + std::to_string(t.m) + " < 12");

  // C2 words by binary weight, with per-coordinate bit counts.
  std::vector<Integer> c2_count(25, 0);
  std::vector<std::vector<Integer>> c2_bits(25, std::vector<Integer>(24, 0));
  for (std::uint32_t w : c2.binary.codewords()) {
    const int wt = std::popcount(w);
    ++c2_count[static_cast<std::size_t>(wt)];
    for (std::size_t i = 0; i < 24; ++i) {
      if ((w >> i) & 1u) ++c2_bits[static_cast<std::size_t>(wt)][i];
    }
  }
  auto c2_comp = [&](int wt) {
    Composition comp(static_cast<std::size_t>(k + 1), 0);
    comp[0] = 24 - wt;
    comp[static_cast<std::size_t>(k)] += wt;
    return comp;
  };

  // chM(c) = prod_t theta_t^{n_t} / phi^24, shared by every word of one composition.
  std::vector<PowerTable> theta_pw;
  for (long r = 0; r <= k; ++r) theta_pw.emplace_back(S::coset_theta(k, r, prec), 24, prec.trunc);
  const QSeries inv_phi24 = invert(pow(S::phi(1, prec), 24));
  auto ch_m = [&](const Composition& comp) { return composition_product(theta_pw, comp, prec.trunc) * inv_phi24; };
  const QSeries b24 = pow(S::series_b(prec), 24);
  const Rational half = make_rational(1, 2);
  const bool parity = swe.tracks_parity;
  const bool odd_k = k % 2 == 1;

  for (int wt = 0; wt <= 24; ++wt) {
    if (c2_count[static_cast<std::size_t>(wt)] == 0) continue;
    const Composition comp = c2_comp(wt);
    const auto it = swe.counts.find(comp);
    if (it == swe.counts.end() || Integer(it->second) < c2_count[static_cast<std::size_t>(wt)]) {
      throw InconsistencyError("decompose: histogram misses C2 words of weight " + std::to_string(wt));
    }
    LineGroup g;
    g.kind = LineKind::UntwistedC2;
    g.composition = comp;
    g.lines = c2_count[static_cast<std::size_t>(wt)];
    g.character = wt == 0 ? (ch_m(comp) + b24) * half : ch_m(comp) * half;
    if (parity) g.odd_lines = odd_k ? c2_bits[static_cast<std::size_t>(wt)] : std::vector<Integer>(24, 0);
    t.groups.push_back(std::move(g));
  }
  for (const auto& [comp, n] : swe.counts) {
    Integer lines = n;
    std::vector<Integer> odd;
    if (parity) {
      const auto& o = swe.odd.at(comp);
      odd.assign(o.begin(), o.end());
    }
    // Subtract the C2 words of this composition.
    const bool c2_shape = std::all_of(comp.begin() + 1, comp.end() - 1, [](int x) { return x == 0; });
    if (c2_shape) {
      const int wt = comp[static_cast<std::size_t>(k)];
      lines -= c2_count[static_cast<std::size_t>(wt)];
      if (parity && odd_k) {
        for (std::size_t i = 0; i < 24; ++i) odd[i] -= c2_bits[static_cast<std::size_t>(wt)][i];
      }
    }
    if (lines == 0) continue;
    if (lines % 2 != 0) throw InconsistencyError("decompose: odd number of non-C2 words in a composition class");
    LineGroup g;
    g.kind = LineKind::UntwistedPair;
    g.composition = comp;
    g.lines = lines / 2;
    g.character = ch_m(comp);
    for (auto& x : odd) {
      if (x % 2 != 0) throw InconsistencyError("decompose: c and -c disagree in parity");
      x /= 2;
    }
    g.odd_lines = std::move(odd);
    t.groups.push_back(std::move(g));
  }

  {
    LineGroup g;
    g.kind = LineKind::Twisted;
    g.lines = pow2(24 - static_cast<long>(t.m));
    g.multiplicity = pow2(static_cast<long>(t.m) - 12);
    const auto tw = S::twisted_chars(prec);
    g.character = (pow(tw.f, 24) - pow(tw.g, 24)) * half;
    g.odd_lines.assign(24, 0);
    for (std::uint32_t w : c2.binary_dual.codewords()) {
      for (std::size_t i = 0; i < 24; ++i) {
        if ((w >> i) & 1u) ++g.odd_lines[i];
      }
    }
    t.groups.push_back(std::move(g));
  }

  t.untwisted = QSeries::zero(prec.denom, prec.trunc);
  t.twisted = QSeries::zero(prec.denom, prec.trunc);
  for (const auto& g : t.groups) {
    QSeries& target = g.kind == LineKind::Twisted ? t.twisted : t.untwisted;
    target.add_scaled(g.character, Rational(g.lines * g.multiplicity));
  }
  t.total = t.untwisted + t.twisted;
  return t;
}

SummandTable decompose(const ZkCode& c, long order, const SweOptions& opts) {
  SweOptions o = opts;
  o.track_parity = o.track_parity || c.k() % 2 == 1;
  return decompose(c, enumerate_swe(c, o), table_precision(c.k(), order));
}

Assembly assemble_character(const SummandTable& t) {
  const Precision& prec = t.prec;
  const long k = t.k;
  const Rational half = make_rational(1, 2);
  Assembly a;
  a.line_sum = t.total;

  // swe evaluated at a_0..a_k directly.
  std::vector<PowerTable> a_pw, theta_pw;
  for (long r = 0; r <= k; ++r) {
    a_pw.emplace_back(S::theta_a(k, r, prec), 24, prec.trunc);
    theta_pw.emplace_back(S::coset_theta(k, r, prec), 24, prec.trunc);
  }
  QSeries swe_a = QSeries::zero(prec.denom, prec.trunc);
  a.theta = QSeries::zero(prec.denom, prec.trunc);
  for (const auto& [comp, n] : t.swe.counts) {
    swe_a.add_scaled(composition_product(a_pw, comp, prec.trunc), Rational(Integer(n)));
    a.theta.add_scaled(composition_product(theta_pw, comp, prec.trunc), Rational(Integer(n)));
  }
  const QSeries b24 = pow(S::series_b(prec), 24);
  a.swe_route = (swe_a + b24) * half + S::twisted_closed_form(prec);

  const auto tw = S::twisted_chars(prec);
  const QSeries twisted = (pow(tw.f, 24) - pow(tw.g, 24)) * Rational(2048);
  a.theta_route = (a.theta * invert(pow(S::phi(1, prec), 24)) + b24) * half + twisted;

  require_agree(a.line_sum, a.swe_route, "line-sum and swe-route characters");
  require_agree(a.line_sum, a.theta_route, "line-sum and theta-route characters");
  return a;
}

TraceResult trace_sigma(const SummandTable& t, std::size_t i) {
  if (i >= t.length) throw std::invalid_argument("trace_sigma: coordinate out of range");
  const long k = t.k;
  const Precision& prec = t.prec;
  TraceResult r;
  r.untwisted = QSeries::zero(prec.denom, prec.trunc);
  r.twisted = {QSeries::zero(prec.denom, prec.trunc), QSeries::zero(prec.denom, prec.trunc)};
  for (const auto& g : t.groups) {
    const bool tw = g.kind == LineKind::Twisted;
    const Unit4 even = mu_k(k, tw ? IrrepLabel{Kind::T0minus, 0} : IrrepLabel{Kind::Vplus, 0});
    const Unit4 odd = mu_k(k, tw ? IrrepLabel{Kind::T1minus, 0} : untwisted_label(k, 1));
    Integer n_odd = 0;
    if (g.odd_lines.empty()) {
      if (!(even == odd)) throw std::invalid_argument("trace_sigma: odd k needs a histogram with parity data");
    } else {
      n_odd = g.odd_lines[i];
    }
    const Integer n_even = g.lines - n_odd;
    const Integer re = (n_even * even.re() + n_odd * odd.re()) * g.multiplicity;
    const Integer im = (n_even * even.im() + n_odd * odd.im()) * g.multiplicity;
    if (tw) {
      r.twisted.re.add_scaled(g.character, Rational(re));
      r.twisted.im.add_scaled(g.character, Rational(im));
    } else {
      if (im != 0) throw InconsistencyError("trace_sigma: non-real eigenvalue on an untwisted line");
      r.untwisted.add_scaled(g.character, Rational(re));
    }
  }
  r.total = {r.untwisted + r.twisted.re, r.twisted.im};
  return r;
}

std::string FourAReport::matching_variant() const {
  if (!half_mismatch && !full_mismatch) return "both";
  if (!half_mismatch) return "1/2";
  if (!full_mismatch) return "1";
  return "neither";
}

nlohmann::json FourAReport::to_json() const {
  auto mm = [](const std::optional<SeriesMismatch>& m) -> nlohmann::json {
    if (!m) return nullptr;
    return {{"exponent", to_string(m->exponent_value())}, {"lhs", to_string(m->lhs)}, {"rhs", to_string(m->rhs)}};
  };
  return {{"coordinate", coordinate},
          {"matching_b24_coefficient", matching_variant()},
          {"series", series.to_json()},
          {"eta_quotient", eta_quotient.to_json()},
          {"half_variant_mismatch", mm(half_mismatch)},
          {"full_variant_mismatch", mm(full_mismatch)}};
}

FourAReport mckay_thompson_4A(const SummandTable& t, std::size_t i) {
  if (t.k % 2 == 0) throw std::invalid_argument("mckay_thompson_4A: k must be odd");
  const TraceResult tr = trace_sigma(t, i);
  if (!tr.total.im.is_zero()) throw InconsistencyError("mckay_thompson_4A: trace has a nonzero imaginary part");
  const long d = t.prec.denom;
  FourAReport rep;
  rep.coordinate = i;
  rep.series = tr.total.re.shifted(-d);
  rep.full_b_variant = rep.series + (pow(S::series_b(t.prec), 24) * make_rational(1, 2)).shifted(-d);
  rep.eta_quotient = S::eta_quotient_4a(t.prec.shifted(-d));
  rep.half_mismatch = first_mismatch(rep.series, rep.eta_quotient);
  rep.full_mismatch = first_mismatch(rep.full_b_variant, rep.eta_quotient);
  return rep;
}

}  // namespace vnat
