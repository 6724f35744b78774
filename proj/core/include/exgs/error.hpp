#pragma once

#include <stdexcept>
#include <string>

namespace exgs {

// Root of every error the library throws. Callers that only need a message can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied value is outside its documented domain.
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

// A domain-type invariant does not hold (e.g. a camera rotation that is not orthonormal).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Input bytes do not follow the expected file format.
class FormatError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

class UnsupportedVersionError : public FormatError {
 public:
  using FormatError::FormatError;
};

// The body ends before the length implied by the header.
class TruncationError : public FormatError {
 public:
  TruncationError(const std::string& what, std::size_t expected, std::size_t actual);

  std::size_t expected_bytes() const noexcept { return expected_; }
  std::size_t actual_bytes() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

// Required properties are missing or have the wrong type.
class SchemaError : public FormatError {
 public:
  using FormatError::FormatError;
};

// Structurally valid header but the payload fails to decode or has the wrong length.
class CorruptionError : public FormatError {
 public:
  using FormatError::FormatError;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace exgs
