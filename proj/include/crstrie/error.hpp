// Copyright 2026 The crstrie Authors
// Licensed under the Apache License, Version 2.0

#pragma once

#include <stdexcept>
#include <string>

namespace crstrie {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid pattern set or compile/scan configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A pattern byte lies outside the alphabet, or a pattern file escape is malformed.
class EncodingError : public Error {
 public:
  using Error::Error;
};

/// Serialized stream has the wrong magic, an unknown version, or trailing bytes.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Serialized stream ended before the declared payload.
class TruncatedError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// A structural invariant of a trie or CRS encoding does not hold.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Row or column index outside the matrix.
class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace crstrie
