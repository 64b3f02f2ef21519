#pragma once

#include <stdexcept>
#include <string>

namespace sovc {

// Base for every error raised by the library. Input-class errors map to CLI
// exit code 2 and HTTP 4xx; everything else is an internal error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual bool is_input_error() const { return false; }
};

/// Malformed or inconsistent user-supplied data (bad JSON, bbox out of frame, ...).
class InputError : public Error {
 public:
  explicit InputError(const std::string& what, std::string field = {})
      : Error(what), field_(std::move(field)) {}
  bool is_input_error() const override { return true; }
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ParseError : public InputError {
 public:
  using InputError::InputError;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

/// Binary container or image header does not match its payload.
class FormatError : public InputError {
 public:
  using InputError::InputError;
};

/// A caller violated an API precondition (wrong dimension, shape mismatch).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Training produced non-finite values.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace sovc
