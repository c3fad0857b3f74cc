#pragma once

#include <stdexcept>
#include <string>

namespace nloop {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Root refinement or a numeric self-consistency check did not reach the
/// requested number of digits.
class PrecisionFailure : public Error {
 public:
  using Error::Error;
};

/// Evaluation of a polylogarithm at its pole w = 1.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// The propagator matrix -B^{-1}A + diag(1/(1-z)) is singular.
class Degenerate : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Unparseable or structurally invalid input file.
class MalformedFile : public Error {
 public:
  using Error::Error;
};

/// Well-formed JSON that violates the datum schema (missing key, bad shape).
class SchemaError : public MalformedFile {
 public:
  using MalformedFile::MalformedFile;
};

/// A field element whose coefficient list does not match the field degree.
class FieldError : public MalformedFile {
 public:
  using MalformedFile::MalformedFile;
};

/// A prime that divides a denominator met during a modular computation.
class BadPrime : public Error {
 public:
  using Error::Error;
};

}  // namespace nloop
