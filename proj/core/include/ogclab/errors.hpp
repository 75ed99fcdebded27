#pragma once

#include <stdexcept>
#include <string>

namespace ogclab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A graph violates a structural invariant (disconnected, bad pairing, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// (g, S) outside the stable range 2g + |S| - 2 > 0.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; the message names the file.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A mathematical self-check failed (d^2 != 0, rank disagreement, ...).
class InternalCheckError : public Error {
 public:
  using Error::Error;
};

/// A resource cap (--max-cells, --max-minutes) was hit.
class ResourceCapError : public Error {
 public:
  using Error::Error;
};

}  // namespace ogclab
