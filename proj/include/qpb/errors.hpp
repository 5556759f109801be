#pragma once

#include <stdexcept>
#include <string>

namespace qpb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

/// Raised when an exact evaluation hits a vanishing denominator.
class PoleError : public Error {
 public:
  explicit PoleError(const std::string& den) : Error("pole: denominator " + den + " vanishes") {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DomainMismatch : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  explicit CapExceeded(int need, int cap)
      : Error("degree cap exceeded: need " + std::to_string(need) + ", cap " + std::to_string(cap)) {}
};

/// A data pack lacks something an operation needs (preimage, table row, ...).
class SpecIncomplete : public Error {
 public:
  using Error::Error;
};

/// Preconditions of a construction failed; the message names the witness.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

}  // namespace qpb
