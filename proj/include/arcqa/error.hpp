#pragma once

#include <stdexcept>
#include <string>

namespace arcqa {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data (question files, datasets, embedding files).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Inconsistent configuration: dimension mismatches, bad hyperparameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written, or a persisted artifact is corrupt.
class IoError : public Error {
public:
    using Error::Error;
};

/// Precondition violated by the caller (unknown doc id, k = 0, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace arcqa
