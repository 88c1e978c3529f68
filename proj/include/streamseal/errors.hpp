#pragma once

#include <stdexcept>
#include <string>

namespace streamseal {

// Base for every toolkit error. Failure modes that belong to an audit
// verdict are reported in the verdict instead of thrown.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteNumberError : public Error {
 public:
  using Error::Error;
};

class InvalidTimestampError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
  ParseError(std::size_t line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A payload file already exists at the target path with different content.
class ExistsConflictError : public Error {
 public:
  using Error::Error;
};

class EmptyWindowError : public Error {
 public:
  using Error::Error;
};

class TargetNotFoundError : public Error {
 public:
  using Error::Error;
};

class LedgerError : public Error {
 public:
  using Error::Error;
};

class LedgerUnreachableError : public LedgerError {
 public:
  using LedgerError::LedgerError;
};

class PermissionDeniedError : public LedgerError {
 public:
  using LedgerError::LedgerError;
};

class UnknownStreamError : public LedgerError {
 public:
  using LedgerError::LedgerError;
};

class OversizedItemError : public LedgerError {
 public:
  using LedgerError::LedgerError;
};

class WindowUnavailableError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace streamseal
