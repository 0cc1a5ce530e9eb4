#pragma once

#include <stdexcept>
#include <string>

namespace vnat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A coefficient was requested at or beyond the known truncation order.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Two computations that must agree did not; indicates a bug, not bad input.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::string progress)
      : Error(what), progress_(std::move(progress)) {}
  const std::string& progress() const { return progress_; }

 private:
  std::string progress_;
};

class NotSublatticeError : public Error {
 public:
  using Error::Error;
};

class InputNotExtremal : public Error {
 public:
  using Error::Error;
};

class FixtureCorrupt : public Error {
 public:
  using Error::Error;
};

class UnverifiedObject : public Error {
 public:
  using Error::Error;
};

}  // namespace vnat
