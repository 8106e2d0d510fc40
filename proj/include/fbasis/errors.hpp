#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbasis {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grammar violation. `offset` is the byte offset into the input where
/// parsing stopped; `expected` lists the tokens that would have been accepted.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
      : Error(format(message, offset, expected)),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string format(const std::string& message, std::size_t offset,
                            const std::vector<std::string>& expected) {
    std::string out = "parse error at offset " + std::to_string(offset) + ": " + message;
    if (!expected.empty()) {
      out += " (expected";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        out += (i == 0 ? " " : ", ") + expected[i];
      }
      out += ")";
    }
    return out;
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Iterative solver hit its cap; the last bracket is kept for diagnostics.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double lo, double hi)
      : Error(what + " [bracket " + std::to_string(lo) + ", " + std::to_string(hi) + "]"),
        lo_(lo),
        hi_(hi) {}
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

class NotStationary : public Error {
 public:
  using Error::Error;
};

class NotSeparable : public Error {
 public:
  using Error::Error;
};

class NotDivergent : public Error {
 public:
  using Error::Error;
};

class CriterionHolds : public Error {
 public:
  using Error::Error;
};

/// The admissibility gate refuted the target; carries the witness set text.
class NotAdmissible : public Error {
 public:
  NotAdmissible(const std::string& what, std::string witness)
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A precondition could not be decided either way.
class Undecided : public Error {
 public:
  using Error::Error;
};

}  // namespace fbasis
