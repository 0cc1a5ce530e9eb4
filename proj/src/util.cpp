#include <cctype>
#include <regex>

#include "vnat/arith.hpp"
#include "vnat/budget.hpp"
#include "vnat/errors.hpp"

namespace vnat {

Rational parse_rational(const std::string& text) {
  static const std::regex pattern(R"(\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw ParseError("not a rational number: '" + text + "'");
  Integer num(m[1].str());
  Integer den = m[2].matched ? Integer(m[2].str()) : Integer(1);
  if (den == 0) throw ParseError("zero denominator in '" + text + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::chrono::milliseconds parse_duration(const std::string& text) {
  static const std::regex pattern(R"(\s*(\d+(?:\.\d+)?)\s*(ms|s|m|h)?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw ParseError("not a duration: '" + text + "'");
  const double value = std::stod(m[1].str());
  const std::string unit = m[2].matched ? m[2].str() : "s";
  double ms = value * 1000.0;
  if (unit == "ms") ms = value;
  if (unit == "m") ms = value * 60'000.0;
  if (unit == "h") ms = value * 3'600'000.0;
  if (ms <= 0) throw ParseError("duration must be positive: '" + text + "'");
  return std::chrono::milliseconds(static_cast<long long>(ms));
}

}  // namespace vnat
