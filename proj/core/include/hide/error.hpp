#pragma once

#include <stdexcept>
#include <string>

namespace hide {

// Base class for every error raised by the library. The CLI maps IoError to
// exit code 1 and every other subclass to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Bytes do not follow the expected layout (bad magic, unparsable header).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Layout is recognised but the content is truncated or inconsistent with the
// header (for example a missing attention plane).
class CorruptionError : public Error {
 public:
  using Error::Error;
};

// A value violates a domain invariant (non-finite weight, out-of-bounds box,
// shape mismatch, empty key map list).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A configuration parameter is outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A point or index lies outside the domain of a mapping.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace hide
