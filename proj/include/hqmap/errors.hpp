#pragma once

#include <stdexcept>
#include <string>

namespace hqmap {

/// Base class for every error raised by the library. The CLI reports input,
/// domain and curve errors with exit status 2 and the rest with status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (bad sizes, bad spec, bad argument).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested outside the closed unit disk.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Curve failed a geometric validity test (self-intersection, near self-touching).
class InvalidCurveError : public Error {
 public:
  using Error::Error;
};

/// An operation's stated precondition does not hold for the given data.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Majorant breakpoints underflowed before the requested range was covered.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, int deepest_level)
      : Error(what), deepest_level_(deepest_level) {}
  int deepest_level() const noexcept { return deepest_level_; }

 private:
  int deepest_level_;
};

/// The Lipschitz certificate cannot be assembled (non-Dini modulus).
class CertificateUnavailable : public Error {
 public:
  using Error::Error;
};

}  // namespace hqmap
