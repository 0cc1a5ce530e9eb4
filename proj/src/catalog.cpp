#include "vnat/catalog.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vnat/errors.hpp"

namespace vnat {
namespace {

// Tokenizes non-comment lines into rows of integers.
std::vector<std::vector<std::string>> read_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  return rows;
}

long to_long(const std::string& tok, const std::string& origin, std::size_t row) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) {
    throw ParseError(origin + ": row " + std::to_string(row + 1) + ": '" + tok + "' is not an integer");
  }
  return v;
}

Matrix body(const std::vector<std::vector<std::string>>& rows, std::size_t width, const std::string& origin) {
  Matrix m;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw ParseError(origin + ": row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                       " entries, expected " + std::to_string(width));
    }
    Word w;
    for (const auto& t : rows[r]) w.push_back(to_long(t, origin, r));
    m.push_back(std::move(w));
  }
  return m;
}

void expect_header(const std::vector<std::vector<std::string>>& rows, std::size_t n, const std::string& origin,
                   const char* shape) {
  if (rows.empty() || rows[0].size() != n) throw ParseError(origin + ": expected header '" + shape + "'");
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open " + path);
  return f;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

std::string join_row(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(w[i]);
  }
  return s;
}

void write_meta(const std::filesystem::path& payload, const DiscoveryRecord& rec, const std::string& kind) {
  nlohmann::json meta{{"kind", kind},
                      {"seed", rec.seed},
                      {"budget", rec.budget},
                      {"seconds", rec.seconds},
                      {"transcript", rec.transcript},
                      {"extra", rec.extra}};
  std::filesystem::path m = payload;
  m.replace_extension(".meta.json");
  write_file(m, meta.dump(2) + "\n");
}

}  // namespace

std::string fixture_dir() {
  if (const char* env = std::getenv("VNAT_FIXTURE_DIR"); env && *env) return env;
  return VNAT_FIXTURE_DIR;
}

ZkCode parse_code(std::istream& in, const std::string& origin) {
  const auto rows = read_rows(in);
  expect_header(rows, 2, origin, "n modulus");
  const long n = to_long(rows[0][0], origin, 0), modulus = to_long(rows[0][1], origin, 0);
  if (n <= 0 || modulus < 2 || modulus % 2 != 0) throw ParseError(origin + ": need n > 0 and an even modulus >= 2");
  Matrix m = body(rows, static_cast<std::size_t>(n), origin);
  return ZkCode(modulus, static_cast<std::size_t>(n), std::move(m));
}

IntegralLattice parse_lattice(std::istream& in, const std::string& origin) {
  const auto rows = read_rows(in);
  expect_header(rows, 3, origin, "rank scale_num scale_den");
  const long rank = to_long(rows[0][0], origin, 0);
  const long num = to_long(rows[0][1], origin, 0), den = to_long(rows[0][2], origin, 0);
  if (rank <= 0 || num <= 0 || den <= 0) throw ParseError(origin + ": rank and scale must be positive");
  if (rows.size() != static_cast<std::size_t>(rank) + 1) throw ParseError(origin + ": expected " + std::to_string(rank) + " basis rows");
  Matrix m = body(rows, rows[1].size(), origin);
  IntegralLattice l(std::move(m), make_rational(num, den));
  if (l.determinant() == 0) throw ParseError(origin + ": basis rows are linearly dependent");
  return l;
}

std::pair<Frame, Rational> parse_frame(std::istream& in, const std::string& origin) {
  const auto rows = read_rows(in);
  expect_header(rows, 3, origin, "k scale_num scale_den");
  Frame f;
  f.k = to_long(rows[0][0], origin, 0);
  const long num = to_long(rows[0][1], origin, 0), den = to_long(rows[0][2], origin, 0);
  if (f.k < 1 || num <= 0 || den <= 0) throw ParseError(origin + ": k and scale must be positive");
  if (rows.size() < 2) throw ParseError(origin + ": no frame vectors");
  f.vectors = body(rows, rows[1].size(), origin);
  return {f, make_rational(num, den)};
}

ZkCode read_code(const std::string& path) {
  auto f = open_in(path);
  return parse_code(f, path);
}

IntegralLattice read_lattice(const std::string& path) {
  auto f = open_in(path);
  return parse_lattice(f, path);
}

std::pair<Frame, Rational> read_frame(const std::string& path) {
  auto f = open_in(path);
  return parse_frame(f, path);
}

std::string format_code(const ZkCode& c) {
  std::string s = std::to_string(c.length()) + " " + std::to_string(c.modulus()) + "\n";
  for (const Word& g : c.gens()) s += join_row(g) + "\n";
  return s;
}

std::string format_lattice(const IntegralLattice& l) {
  std::string s = std::to_string(l.rank()) + " " + l.scale().get_num().get_str() + " " + l.scale().get_den().get_str() + "\n";
  for (const Word& b : l.basis()) s += join_row(b) + "\n";
  return s;
}

std::string format_frame(const Frame& f, const Rational& scale) {
  std::string s = std::to_string(f.k) + " " + scale.get_num().get_str() + " " + scale.get_den().get_str() + "\n";
  for (const Word& v : f.vectors) s += join_row(v) + "\n";
  return s;
}

void verify_golay(const BinaryCode& g) {
  if (g.length() != 24) throw FixtureCorrupt("Golay fixture: length " + std::to_string(g.length()) + ", expected 24");
  if (g.dim() != 12) throw FixtureCorrupt("Golay fixture: dimension " + std::to_string(g.dim()) + ", expected 12");
  if (!(g.dual() == g)) throw FixtureCorrupt("Golay fixture: code is not self-dual");
  if (!g.is_doubly_even()) throw FixtureCorrupt("Golay fixture: code is not doubly-even");
  const auto wd = g.weight_distribution();
  for (std::size_t w = 1; w < 8; ++w) {
    if (wd[w] != 0) throw FixtureCorrupt("Golay fixture: minimum weight is " + std::to_string(w) + ", expected 8");
  }
}

BinaryCode golay_fixture(const std::string& dir) {
  const std::string path = dir + "/codes/golay24.txt";
  ZkCode z = [&] {
    try {
      return read_code(path);
    } catch (const ParseError& e) {
      throw FixtureCorrupt(std::string("Golay fixture unreadable: ") + e.what());
    }
  }();
  if (z.modulus() != 2) throw FixtureCorrupt("Golay fixture: modulus must be 2");
  std::vector<std::uint32_t> rows;
  for (const Word& g : z.gens()) {
    std::uint32_t b = 0;
    for (std::size_t i = 0; i < g.size(); ++i) b |= static_cast<std::uint32_t>(g[i] & 1) << i;
    rows.push_back(b);
  }
  BinaryCode bc(z.length(), rows);
  verify_golay(bc);
  return bc;
}

void store_discovery(const std::string& dir, const std::string& name, const Frame& f, const IntegralLattice& lattice,
                     const DiscoveryRecord& rec) {
  verify_frame(lattice, f);
  const std::filesystem::path p = std::filesystem::path(dir) / "frames" / (name + ".txt");
  write_file(p, format_frame(f, lattice.scale()));
  write_meta(p, rec, "frame");
}

void store_discovery(const std::string& dir, const std::string& name, const ZkCode& c, const DiscoveryRecord& rec) {
  const TypeIIReport r = verify_type_ii(c);
  if (!r.type_ii) throw UnverifiedObject("refusing to store code '" + name + "': " + r.witness);
  const std::filesystem::path p = std::filesystem::path(dir) / "codes" / (name + ".txt");
  write_file(p, format_code(c));
  write_meta(p, rec, "code");
}

nlohmann::json read_meta(const std::string& payload_path) {
  std::filesystem::path m = payload_path;
  m.replace_extension(".meta.json");
  std::ifstream f(m);
  if (!f) throw FixtureCorrupt("missing metadata " + m.string());
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw FixtureCorrupt("bad metadata " + m.string() + ": " + e.what());
  }
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skipped: return "SKIPPED";
  }
  return "?";
}

nlohmann::json emit_report(const std::vector<CheckResult>& results) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& r : results) {
    entries.push_back({{"check_name", r.check_name},
                       {"status", to_string(r.status)},
                       {"witness", r.witness},
                       {"exact_values", r.exact_values}});
  }
  return {{"schema", 1}, {"entries", entries}};
}

}  // namespace vnat
