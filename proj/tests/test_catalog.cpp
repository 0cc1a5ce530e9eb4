#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vnat/catalog.hpp"
#include "vnat/errors.hpp"

using namespace vnat;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vnat_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("Golay fixture") {
  const BinaryCode g = golay_fixture();
  CHECK(g.dim() == 12);
  const auto wd = g.weight_distribution();
  CHECK(wd[8] == 759);
  CHECK(wd[12] == 2576);
  CHECK(wd[16] == 759);
  CHECK(g.dual() == g);
}

TEST_CASE("corrupt Golay fixture") {
  const fs::path dir = scratch_dir("golay");
  fs::create_directories(dir / "codes");
  std::ifstream in(fixture_dir() + "/codes/golay24.txt");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  // flip one bit in the last generator row
  const auto pos = text.rfind('1');
  text[pos] = '0';
  std::ofstream(dir / "codes" / "golay24.txt") << text;
  CHECK_THROWS_AS(golay_fixture(dir.string()), FixtureCorrupt);
  std::ofstream(dir / "codes" / "golay24.txt") << "24 2\n1 0 x\n";
  CHECK_THROWS_AS(golay_fixture(dir.string()), FixtureCorrupt);
}

TEST_CASE("parsers") {
  std::istringstream good("# comment\n4 4\n1 1 1 1\n0 2 0 2 # trailing\n\n0 0 2 2\n");
  const ZkCode c = parse_code(good);
  CHECK(c.modulus() == 4);
  CHECK(c.card() == 16);
  std::istringstream round(format_code(c));
  CHECK(parse_code(round) == c);

  std::istringstream short_row("4 4\n1 1 1\n");
  CHECK_THROWS_AS(parse_code(short_row), ParseError);
  std::istringstream bad_tok("4 4\n1 1 1 z\n");
  CHECK_THROWS_AS(parse_code(bad_tok), ParseError);
  std::istringstream odd_mod("4 3\n1 1 1 1\n");
  CHECK_THROWS_AS(parse_code(odd_mod), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_code(empty), ParseError);

  std::istringstream lat("2 1 2\n2 0\n0 2\n");
  const IntegralLattice l = parse_lattice(lat);
  CHECK(l.scale() == make_rational(1, 2));
  CHECK(l.determinant() == 4);
  std::istringstream dep("2 1 1\n1 1\n2 2\n");
  CHECK_THROWS_AS(parse_lattice(dep), ParseError);
  std::istringstream count("3 1 1\n1 0 0\n0 1 0\n");
  CHECK_THROWS_AS(parse_lattice(count), ParseError);
}

TEST_CASE("stored fixtures re-verify") {
  const IntegralLattice leech = standard_leech(golay_fixture());
  const IntegralLattice stored = read_lattice(fixture_dir() + "/lattices/leech.txt");
  CHECK(format_lattice(stored) == format_lattice(leech));
  for (long k : {2L, 3L}) {
    const std::string name = "leech_k" + std::to_string(k);
    const auto [frame, scale] = read_frame(fixture_dir() + "/frames/" + name + ".txt");
    CHECK(frame.k == k);
    CHECK(scale == leech.scale());
    CHECK_NOTHROW(verify_frame(leech, frame));
    const ZkCode code = read_code(fixture_dir() + "/codes/" + name + ".txt");
    CHECK(frame_to_code(leech, frame) == code);
    CHECK(verify_type_ii(code).type_ii);
    CHECK(code.card() == ipow(2 * k, 12));
    const auto meta = read_meta(fixture_dir() + "/frames/" + name + ".txt");
    CHECK(meta["seed"] == 1);
    CHECK(meta["kind"] == "frame");
  }
}

TEST_CASE("store and load round trip") {
  const fs::path dir = scratch_dir("store");
  const IntegralLattice leech = standard_leech(golay_fixture());
  const auto [frame, scale] = read_frame(fixture_dir() + "/frames/leech_k2.txt");
  DiscoveryRecord rec;
  rec.seed = 7;
  rec.budget = "1m";
  rec.transcript = {"step"};
  store_discovery(dir.string(), "f", frame, leech, rec);
  const auto [back, s2] = read_frame((dir / "frames" / "f.txt").string());
  CHECK(back.vectors == frame.vectors);
  CHECK(back.k == frame.k);
  CHECK(s2 == scale);
  const auto meta = read_meta((dir / "frames" / "f.txt").string());
  CHECK(meta["seed"] == 7);
  CHECK(meta["transcript"][0] == "step");

  // byte-stable: storing what was loaded reproduces the file
  std::ifstream a(dir / "frames" / "f.txt");
  std::stringstream sa;
  sa << a.rdbuf();
  CHECK(sa.str() == format_frame(back, s2));

  Frame bad = frame;
  bad.vectors.pop_back();
  CHECK_THROWS_AS(store_discovery(dir.string(), "bad", bad, leech, rec), UnverifiedObject);
  CHECK_FALSE(fs::exists(dir / "frames" / "bad.txt"));

  const ZkCode not_type_ii(4, 4, {{1, 1, 1, 1}, {0, 2, 0, 2}, {0, 0, 2, 2}});
  CHECK_THROWS_AS(store_discovery(dir.string(), "c", not_type_ii, rec), UnverifiedObject);
  CHECK_THROWS_AS(read_meta((dir / "frames" / "missing.txt").string()), FixtureCorrupt);
}

TEST_CASE("reports") {
  const auto empty = emit_report({});
  CHECK(empty["schema"] == 1);
  CHECK(empty["entries"].is_array());
  CHECK(empty["entries"].empty());

  CheckResult fail{"character q^2", CheckStatus::Fail,
                   {{"exponent", "2"}, {"got", "196883"}, {"expected", "196884"}},
                   {"196883", "196884"}};
  const auto r = emit_report({fail, CheckResult{"x", CheckStatus::Skipped, nullptr, {}}});
  CHECK(r["entries"].size() == 2);
  CHECK(r["entries"][0]["status"] == "FAIL");
  CHECK(r["entries"][0]["witness"]["exponent"] == "2");
  CHECK(r["entries"][0]["exact_values"][1] == "196884");
  CHECK(r["entries"][1]["status"] == "SKIPPED");
  CHECK(r.dump() == emit_report({fail, CheckResult{"x", CheckStatus::Skipped, nullptr, {}}}).dump());
}
