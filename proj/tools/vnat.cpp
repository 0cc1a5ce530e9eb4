// vnat: command-line driver for the code / lattice / moonshine pipeline.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or parse error,
// 3 time budget exceeded. Standard output carries only the result (table or
// JSON); progress goes to standard error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "vnat/catalog.hpp"
#include "vnat/errors.hpp"
#include "vnat/moonshine.hpp"
#include "vnat/special_series.hpp"

using namespace vnat;
namespace S = vnat::series;

namespace {

struct Config {
  long order = 8;
  std::uint64_t seed = 1;
  std::string budget;
  unsigned workers = 1;
  std::string format = "table";

  bool json() const { return format == "json"; }
  Budget make_budget() const { return budget.empty() ? Budget::unlimited() : Budget(parse_duration(budget)); }
};

// A fixture name (k2 -> fixtures/codes/k2.txt) or a path.
std::string resolve(const std::string& arg, const char* kind) {
  if (std::filesystem::exists(arg)) return arg;
  const std::string p = fixture_dir() + "/" + kind + "/" + arg + ".txt";
  if (std::filesystem::exists(p)) return p;
  throw ParseError(std::string("no such ") + kind + " file or fixture: " + arg);
}

IntegralLattice load_lattice(const std::string& arg) {
  if (arg.empty() || arg == "leech") return standard_leech(golay_fixture());
  return read_lattice(resolve(arg, "lattices"));
}

void print_report(const Config& cfg, const std::vector<CheckResult>& results) {
  if (cfg.json()) {
    std::cout << emit_report(results).dump(2) << "\n";
    return;
  }
  for (const auto& r : results) {
    std::cout << std::left << std::setw(8) << to_string(r.status) << r.check_name;
    for (const auto& v : r.exact_values) std::cout << " " << v;
    if (!r.witness.is_null()) std::cout << "  [" << (r.witness.is_string() ? r.witness.get<std::string>() : r.witness.dump()) << "]";
    std::cout << "\n";
  }
}

int exit_code(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (r.status == CheckStatus::Fail) return 1;
  }
  return 0;
}

CheckResult check(std::string name, bool ok, nlohmann::json witness = nullptr, std::vector<std::string> values = {}) {
  return CheckResult{std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(witness), std::move(values)};
}

SweOptions swe_options(const Config& cfg, bool parity) {
  SweOptions o;
  o.track_parity = parity;
  o.workers = cfg.workers;
  o.budget = cfg.make_budget();
  o.progress = [](std::uint64_t done, std::uint64_t total) {
    std::cerr << "swe: " << done << " codewords" << (total ? " of " + std::to_string(total) : std::string()) << "\n";
  };
  return o;
}

std::string rat(const Rational& r) { return to_string(r); }

// ---- code ----

int code_verify(const Config& cfg, const std::string& path) {
  const ZkCode c = read_code(resolve(path, "codes"));
  std::vector<CheckResult> out;
  const TypeIIReport t = verify_type_ii(c);
  out.push_back(check("self-orthogonal", t.self_orthogonal, t.self_orthogonal ? nullptr : nlohmann::json(t.witness)));
  out.push_back(check("self-dual", t.self_dual, nullptr, {c.card().get_str()}));
  out.push_back(check("type-ii", t.type_ii, t.type_ii ? nullptr : nlohmann::json(t.witness)));
  if (t.type_ii && c.length() == 24) {
    const SweHistogram h = enumerate_swe(c, swe_options(cfg, false));
    const long w = h.min_nonzero_weight().value_or(0);
    out.push_back(check("extremal", w == 8 * c.k(), "minimum Euclidean weight " + std::to_string(w),
                        {std::to_string(w), std::to_string(8 * c.k())}));
  } else {
    out.push_back(CheckResult{"extremal", CheckStatus::Skipped, "needs a Type II code of length 24", {}});
  }
  const C2Analysis a = c2_analysis(c);
  out.push_back(check("c2-dimension", a.m >= c.length() / 2, "m = " + std::to_string(a.m), {std::to_string(a.m)}));
  out.push_back(check("c2-contains-all-ones", a.contains_all_ones));
  out.push_back(check("c2-binary-type-ii", a.binary_type_ii));
  print_report(cfg, out);
  return exit_code(out);
}

int code_swe(const Config& cfg, const std::string& path, bool parity) {
  const ZkCode c = read_code(resolve(path, "codes"));
  const SweHistogram h = enumerate_swe(c, swe_options(cfg, parity));
  if (cfg.json()) {
    std::cout << h.to_json().dump(2) << "\n";
    return 0;
  }
  std::cout << "# composition (n_0..n_k)  Euclidean weight  count\n";
  for (const auto& [comp, n] : h.counts) {
    for (std::size_t t = 0; t < comp.size(); ++t) std::cout << (t ? "," : "") << comp[t];
    std::cout << "  " << composition_weight(comp) << "  " << n << "\n";
  }
  std::cout << "# total " << h.total() << "\n";
  return 0;
}

// ---- lattice ----

int lattice_build_leech(const Config& cfg, const std::string& out_path) {
  const IntegralLattice l = standard_leech(golay_fixture());
  const std::string text = format_lattice(l);
  if (!out_path.empty()) {
    std::ofstream(out_path) << text;
  } else if (cfg.json()) {
    std::cout << nlohmann::json{{"rank", l.rank()}, {"scale", rat(l.scale())}, {"basis", l.basis()}}.dump(2) << "\n";
  } else {
    std::cout << text;
  }
  return 0;
}

int lattice_check(const Config& cfg, const std::string& path, long max_norm) {
  const IntegralLattice l = load_lattice(path);
  const LeechCertificate cert = certify_leech(l);
  std::vector<CheckResult> out;
  out.push_back(check("integral", cert.integral));
  out.push_back(check("even", cert.even));
  out.push_back(check("unimodular", cert.unimodular, nullptr, {rat(cert.determinant)}));
  out.push_back(check("rootless", cert.rootless, cert.rootless ? nullptr : nlohmann::json(cert.witness)));
  if (max_norm > 0 && cert.integral) {
    EnumOptions eo;
    eo.workers = cfg.workers;
    eo.budget = cfg.make_budget();
    for (const auto& [norm, n] : count_by_norm(l, Rational(max_norm), eo)) {
      out.push_back(CheckResult{"count norm " + rat(norm), CheckStatus::Pass, nullptr, {std::to_string(n)}});
    }
  }
  print_report(cfg, out);
  return exit_code(out);
}

// ---- frame ----

int frame_search_cmd(const Config& cfg, const std::string& lattice, long k, const std::string& store) {
  const IntegralLattice l = load_lattice(lattice);
  FrameSearchOptions fo;
  fo.seed = cfg.seed;
  fo.workers = cfg.workers;
  fo.budget = cfg.make_budget();
  fo.log = [](const std::string& s) { std::cerr << "frame search: " << s << "\n"; };
  const FrameSearchResult r = frame_search(l, k, fo);
  const ZkCode code = frame_to_code(l, r.frame);
  if (!store.empty()) {
    DiscoveryRecord rec;
    rec.seed = cfg.seed;
    rec.budget = cfg.budget.empty() ? "unlimited" : cfg.budget;
    rec.seconds = r.seconds;
    rec.transcript = r.transcript;
    rec.extra = {{"attempts", r.attempts}, {"vectors", r.vectors}, {"lattice", lattice.empty() ? "leech" : lattice}};
    store_discovery(fixture_dir(), store, r.frame, l, rec);
    rec.extra["frame"] = store;
    store_discovery(fixture_dir(), store, code, rec);
    std::cerr << "stored frames/" << store << ".txt and codes/" << store << ".txt\n";
  }
  if (cfg.json()) {
    std::cout << nlohmann::json{{"k", k}, {"seed", cfg.seed}, {"attempts", r.attempts}, {"frame", r.frame.vectors},
                                {"code", code.to_json()}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << format_frame(r.frame, l.scale());
  }
  return 0;
}

int frame_extract(const Config& cfg, const std::string& frame_path, const std::string& lattice) {
  const IntegralLattice l = load_lattice(lattice);
  const auto [frame, scale] = read_frame(resolve(frame_path, "frames"));
  if (scale != l.scale()) throw ParseError("frame scale " + rat(scale) + " differs from lattice scale " + rat(l.scale()));
  verify_frame(l, frame);
  const ZkCode code = frame_to_code(l, frame);
  if (cfg.json()) {
    std::cout << code.to_json().dump(2) << "\n";
  } else {
    std::cout << format_code(code);
  }
  return 0;
}

// ---- moonshine ----

SummandTable table_for(const Config& cfg, const std::string& path) {
  if (cfg.order < 2) throw ParseError("--order must be at least 2");
  const ZkCode c = read_code(resolve(path, "codes"));
  return decompose(c, cfg.order, swe_options(cfg, c.k() % 2 == 1));
}

void coefficient_checks(std::vector<CheckResult>& out, const std::string& prefix, const QSeries& got,
                        const QSeries& want, long lo, long hi) {
  const long d = got.denom();
  for (long e = lo; e <= hi; ++e) {
    const Rational a = got.coeff(e * d), b = want.rescaled(d).coeff(e * d);
    nlohmann::json w = nullptr;
    if (a != b) w = {{"exponent", std::to_string(e)}, {"got", rat(a)}, {"expected", rat(b)}};
    out.push_back(check(prefix + " q^" + std::to_string(e), a == b, w, {rat(a), rat(b)}));
  }
}

int moonshine_character(const Config& cfg, const std::string& path) {
  const SummandTable t = table_for(cfg, path);
  std::vector<CheckResult> out;
  try {
    const Assembly a = assemble_character(t);
    out.push_back(check("assembly routes agree", true));
    const QSeries j = S::j_oracle(Precision::through_order(t.prec.denom, cfg.order)).shifted(t.prec.denom);
    out.push_back(check("integral exponents", t.total.exponents_divisible_by(t.prec.denom) && t.total.is_integral()));
    coefficient_checks(out, "character", a.line_sum, j, 0, cfg.order);
  } catch (const InconsistencyError& e) {
    out.push_back(check("assembly routes agree", false, e.what()));
  }
  print_report(cfg, out);
  return exit_code(out);
}

int moonshine_decompose(const Config& cfg, const std::string& path) {
  const SummandTable t = table_for(cfg, path);
  if (cfg.json()) {
    std::cout << t.to_json().dump(2) << "\n";
  } else {
    std::cout << t.to_table();
  }
  return 0;
}

int moonshine_mt(const Config& cfg, const std::string& path, const std::string& cls, std::size_t coordinate) {
  const SummandTable t = table_for(cfg, path);
  if (coordinate < 1 || coordinate > t.length) throw ParseError("--i must be in 1.." + std::to_string(t.length));
  const std::size_t i = coordinate - 1;
  std::vector<CheckResult> out;
  if (cls == "4A") {
    if (t.k % 2 == 0) throw ParseError("class 4A needs odd k");
    const FourAReport r = mckay_thompson_4A(t, i);
    const std::string variant = r.matching_variant();
    if (cfg.json()) {
      std::cout << r.to_json().dump(2) << "\n";
      return variant == "neither" ? 1 : 0;
    }
    std::cout << "# coordinate " << coordinate << "; b^24 coefficient matching the eta quotient: " << variant << "\n";
    std::cout << std::setw(4) << "n" << std::setw(16) << "line-sum" << std::setw(16) << "b^24 variant" << std::setw(16)
              << "eta quotient\n";
    const long d = t.prec.denom;
    for (long e = -1; e <= cfg.order; ++e) {
      std::cout << std::setw(4) << e << std::setw(16) << rat(r.series.coeff(e * d)) << std::setw(16)
                << rat(r.full_b_variant.coeff(e * d)) << std::setw(16) << rat(r.eta_quotient.coeff(e * d)) << "\n";
    }
    return variant == "neither" ? 1 : 0;
  }
  if (cls == "2B") {
    if (t.k % 2 == 1) throw ParseError("class 2B needs even k");
    const TraceResult tr = trace_sigma(t, i);
    const Rational half = make_rational(1, 2);
    const QSeries b24 = pow(S::series_b(t.prec), 24);
    QSeries swe_a = QSeries::zero(t.prec.denom, t.prec.trunc);
    for (const auto& [comp, n] : t.swe.counts) {
      QSeries p = QSeries::constant(1).truncated(t.prec.trunc);
      for (std::size_t r = 0; r < comp.size(); ++r) p *= pow(S::theta_a(t.k, static_cast<long>(r), t.prec), comp[r]);
      swe_a.add_scaled(p, Rational(Integer(n)));
    }
    const QSeries expected = (swe_a + b24) * half - S::twisted_closed_form(t.prec);
    out.push_back(check("trace imaginary part vanishes", tr.total.im.is_zero()));
    coefficient_checks(out, "trace", tr.total.re.shifted(-t.prec.denom), expected.shifted(-t.prec.denom), -1,
                       cfg.order);
    print_report(cfg, out);
    return exit_code(out);
  }
  throw ParseError("unknown class '" + cls + "' (expected 4A or 2B)");
}

// ---- qseries ----

int qseries_eval(const Config& cfg, const std::string& name, long k, long i) {
  const long d = S::pipeline_denom(k);
  const Precision p = Precision::through_order(d, cfg.order);
  QSeries s;
  if (name == "j") s = S::j_oracle(p);
  else if (name == "e4") s = S::eisenstein_e4(p);
  else if (name == "phi") s = S::phi(1, p);
  else if (name == "eta") s = S::eta(1, p);
  else if (name == "b") s = S::series_b(p);
  else if (name == "a") s = S::theta_a(k, i, p);
  else if (name == "theta") s = S::coset_theta(k, i, p);
  else if (name == "twisted") s = S::twisted_closed_form(p);
  else if (name == "4a") s = S::eta_quotient_4a(p);
  else throw ParseError("unknown series '" + name + "' (j, e4, phi, eta, b, a, theta, twisted, 4a)");
  if (cfg.json()) {
    std::cout << nlohmann::json{{"series", name}, {"terms", s.to_json()}}.dump(2) << "\n";
  } else {
    std::cout << s.to_string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Codes over Z_2k, Leech lattice frames and moonshine characters"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--order", cfg.order, "Series order (integral q-steps)")->check(CLI::Range(2L, 1000L));
  app.add_option("--seed", cfg.seed, "Random seed for searches");
  app.add_option("--budget", cfg.budget, "Time budget, e.g. 90s, 30m");
  app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"table", "json"}));

  std::string code_path, lattice_path, frame_path, out_path, store, cls = "4A", series_name;
  long k = 2, max_norm = 6, series_k = 2, series_i = 0;
  std::size_t coordinate = 1;
  bool parity = false;
  int rc = 0;

  auto* code = app.add_subcommand("code", "Code checks")->require_subcommand(1);
  auto* cv = code->add_subcommand("verify", "Self-dual / Type II / extremal / C2 checks");
  cv->add_option("code", code_path, "Code file or fixture name")->required();
  auto* cs = code->add_subcommand("swe", "Symmetrized weight enumerator");
  cs->add_option("code", code_path, "Code file or fixture name")->required();
  cs->add_flag("--parity", parity, "Track per-coordinate parity counts");

  auto* lat = app.add_subcommand("lattice", "Lattice tools")->require_subcommand(1);
  auto* lb = lat->add_subcommand("build-leech", "Build the Leech lattice from the Golay fixture");
  lb->add_option("--out", out_path, "Write the lattice file here");
  auto* lc = lat->add_subcommand("check", "Even / unimodular / rootless certificate and norm counts");
  lc->add_option("--lattice", lattice_path, "Lattice file or fixture name (default: Leech)");
  lc->add_option("--max-norm", max_norm, "Count vectors up to this norm (0 disables)");

  auto* fr = app.add_subcommand("frame", "Frames")->require_subcommand(1);
  auto* fs = fr->add_subcommand("search", "Search a 2k-frame");
  fs->add_option("--k", k, "Half the frame norm")->check(CLI::Range(1L, 64L));
  fs->add_option("--lattice", lattice_path, "Lattice file or fixture name (default: Leech)");
  fs->add_option("--store", store, "Record frame and code as fixtures under this name");
  auto* fe = fr->add_subcommand("extract", "Extract the code L/N of a frame");
  fe->add_option("--frame", frame_path, "Frame file or fixture name")->required();
  fe->add_option("--lattice", lattice_path, "Lattice file or fixture name (default: Leech)");

  auto* moon = app.add_subcommand("moonshine", "Module decomposition and characters")->require_subcommand(1);
  auto* mc = moon->add_subcommand("character", "Assemble the character and compare with q(J - 744)");
  auto* md = moon->add_subcommand("decompose", "Summand table");
  auto* mm = moon->add_subcommand("mt", "McKay-Thompson series of sigma_i");
  for (auto* s : {mc, md, mm}) s->add_option("--code", code_path, "Code file or fixture name")->required();
  mm->add_option("--class", cls, "4A (odd k) or 2B (even k)");
  mm->add_option("--i", coordinate, "Coordinate, 1-based");

  auto* qs = app.add_subcommand("qseries", "q-series")->require_subcommand(1);
  auto* qe = qs->add_subcommand("eval", "Expand a named series");
  qe->add_option("name", series_name, "j, e4, phi, eta, b, a, theta, twisted, 4a")->required();
  qe->add_option("--k", series_k, "Level for a / theta")->check(CLI::Range(1L, 1000L));
  qe->add_option("--i", series_i, "Coset index for a / theta");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*cv) rc = code_verify(cfg, code_path);
    else if (*cs) rc = code_swe(cfg, code_path, parity);
    else if (*lb) rc = lattice_build_leech(cfg, out_path);
    else if (*lc) rc = lattice_check(cfg, lattice_path, max_norm);
    else if (*fs) rc = frame_search_cmd(cfg, lattice_path, k, store);
    else if (*fe) rc = frame_extract(cfg, frame_path, lattice_path);
    else if (*mc) rc = moonshine_character(cfg, code_path);
    else if (*md) rc = moonshine_decompose(cfg, code_path);
    else if (*mm) rc = moonshine_mt(cfg, code_path, cls, coordinate);
    else if (*qe) rc = qseries_eval(cfg, series_name, series_k, series_i);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << " (" << e.progress() << ")\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FixtureCorrupt& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
