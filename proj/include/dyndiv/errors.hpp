#ifndef DYNDIV_ERRORS_HPP
#define DYNDIV_ERRORS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace dyndiv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent user input (exit code 2 in the CLI).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or argument combination (exit code 1 in the CLI).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public DataError {
 public:
  using DataError::DataError;
};

class DegenerateVectorError : public DataError {
 public:
  using DataError::DataError;
};

class TooFewPointsError : public DataError {
 public:
  using DataError::DataError;
};

class DuplicateIdError : public DataError {
 public:
  using DataError::DataError;
};

class InvalidBaseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class BetaRangeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class EmptyTreeError : public DataError {
 public:
  using DataError::DataError;
};

class KTooLargeError : public DataError {
 public:
  using DataError::DataError;
};

class KTooSmallError : public DataError {
 public:
  using DataError::DataError;
};

class InvalidInitError : public DataError {
 public:
  using DataError::DataError;
};

class BudgetExceededError : public DataError {
 public:
  using DataError::DataError;
};

class MissingGroundTruthError : public DataError {
 public:
  using DataError::DataError;
};

/// Errors tied to a location in an input file. Line numbers are 1-based.
class LocatedError : public DataError {
 public:
  LocatedError(const std::string& what, std::optional<std::size_t> line)
      : DataError(line ? what + " (line " + std::to_string(*line) + ")" : what),
        line_(line) {}

  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::optional<std::size_t> line_;
};

class FormatError : public LocatedError {
 public:
  using LocatedError::LocatedError;
};

/// Non-finite coordinate values.
class ValueError : public LocatedError {
 public:
  using LocatedError::LocatedError;
};

/// A proven guarantee was observed to fail: a bug, never a data problem.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace dyndiv

#endif  // DYNDIV_ERRORS_HPP
