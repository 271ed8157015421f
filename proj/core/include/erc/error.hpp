// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace erc {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Errors caused by malformed or inconsistent input data. The CLI maps these
/// to exit code 2.
class DataError : public Error {
public:
  using Error::Error;
};

/// Errors caused by a numeric failure (divergence, failed gradient check).
/// The CLI maps these to exit code 3.
class NumericError : public Error {
public:
  using Error::Error;
};

class ParseError : public DataError {
public:
  ParseError(const std::string& what, std::size_t line)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class ValidationError : public DataError {
public:
  ValidationError(const std::string& what, std::string subject)
      : DataError(subject.empty() ? what : subject + ": " + what), subject_(std::move(subject)) {}
  const std::string& subject() const noexcept { return subject_; }

private:
  std::string subject_;
};

class FormatError : public DataError {
public:
  using DataError::DataError;
};

class DuplicateKeyError : public DataError {
public:
  explicit DuplicateKeyError(const std::string& key)
      : DataError("duplicate key '" + key + "'"), key_(key) {}
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

class MissingRecordError : public DataError {
public:
  explicit MissingRecordError(const std::string& key)
      : DataError("missing embedding record '" + key + "'"), key_(key) {}
  const std::string& key() const noexcept { return key_; }

private:
  std::string key_;
};

class RangeError : public DataError {
public:
  using DataError::DataError;
};

class SpecError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class ShapeError : public Error {
public:
  using Error::Error;
};

class IndexError : public Error {
public:
  using Error::Error;
};

class EmptySequenceError : public Error {
public:
  using Error::Error;
};

class EmptyEvalError : public Error {
public:
  using Error::Error;
};

class InsufficientRunsError : public Error {
public:
  using Error::Error;
};

class MissingBaselineError : public Error {
public:
  using Error::Error;
};

class LengthMismatch : public Error {
public:
  using Error::Error;
};

class DegenerateGroupError : public Error {
public:
  using Error::Error;
};

class ZeroMarginError : public Error {
public:
  using Error::Error;
};

class DivergenceError : public NumericError {
public:
  using NumericError::NumericError;
};

}  // namespace erc
