#pragma once

#include <stdexcept>
#include <string>

namespace readlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (JSON, CSV, bracketed trees).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Input that parses but violates a data-model invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A caller asked for something that does not exist (unknown feature set,
/// unknown model kind). The CLI maps this to a usage error.
class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace readlab
