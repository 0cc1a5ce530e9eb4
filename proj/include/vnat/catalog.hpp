#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "vnat/lattice.hpp"
#include "vnat/zkcode.hpp"

namespace vnat {

/// Fixture root: $VNAT_FIXTURE_DIR if set, else the source tree's fixtures/.
std::string fixture_dir();

// Text formats. Blank lines and '#' comments are ignored everywhere.
//   code:    "n modulus" then generator rows
//   lattice: "rank scale_num scale_den" then basis rows
//   frame:   "k scale_num scale_den" then one ambient row per frame vector
ZkCode parse_code(std::istream& in, const std::string& origin = "<input>");
IntegralLattice parse_lattice(std::istream& in, const std::string& origin = "<input>");
/// Returns the frame and the scale it was written with.
std::pair<Frame, Rational> parse_frame(std::istream& in, const std::string& origin = "<input>");

ZkCode read_code(const std::string& path);
IntegralLattice read_lattice(const std::string& path);
std::pair<Frame, Rational> read_frame(const std::string& path);

std::string format_code(const ZkCode& c);
std::string format_lattice(const IntegralLattice& l);
std::string format_frame(const Frame& f, const Rational& scale);

/// The extended binary Golay code from fixtures/codes/golay24.txt, checked on
/// load (length 24, dimension 12, self-dual, doubly-even, minimum weight 8).
/// Throws FixtureCorrupt.
BinaryCode golay_fixture(const std::string& dir = fixture_dir());
/// Same checks on an arbitrary candidate.
void verify_golay(const BinaryCode& g);

struct DiscoveryRecord {
  std::uint64_t seed = 0;
  std::string budget;
  double seconds = 0;
  std::vector<std::string> transcript;
  nlohmann::json extra = nlohmann::json::object();
};

/// Writes dir/frames/NAME.txt and NAME.meta.json after re-verifying the frame
/// in `lattice`. Throws UnverifiedObject if verification fails.
void store_discovery(const std::string& dir, const std::string& name, const Frame& f, const IntegralLattice& lattice,
                     const DiscoveryRecord& rec);
/// Writes dir/codes/NAME.txt and NAME.meta.json; the code must be self-dual and Type II.
void store_discovery(const std::string& dir, const std::string& name, const ZkCode& c, const DiscoveryRecord& rec);
nlohmann::json read_meta(const std::string& payload_path);

enum class CheckStatus { Pass, Fail, Skipped };
std::string to_string(CheckStatus s);

struct CheckResult {
  std::string check_name;
  CheckStatus status = CheckStatus::Pass;
  nlohmann::json witness = nullptr;
  std::vector<std::string> exact_values;
};

/// {"schema": 1, "entries": [{check_name, status, witness, exact_values}]}.
nlohmann::json emit_report(const std::vector<CheckResult>& results);

}  // namespace vnat
