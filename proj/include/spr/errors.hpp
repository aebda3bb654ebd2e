#pragma once

#include <stdexcept>
#include <string>

namespace spr {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configured size limit (atom cap, search budget) would be exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// The requested basis cannot support phase retrieval (e.g. |r| constant).
class DegenerateBasis : public Error {
 public:
  using Error::Error;
};

/// An exhaustive search terminated without a result.
class NotFound : public Error {
 public:
  using Error::Error;
};

/// A file could not be read, parsed or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace spr
