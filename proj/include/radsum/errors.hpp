#pragma once

#include <stdexcept>
#include <string>

namespace radsum {

/// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (bad config, invalid generator images).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A request outside the supported mathematical range (w > 0, unsupported cusp).
class OutOfScopeError : public Error {
public:
    using Error::Error;
};

/// A group/cusp combination the enumerators do not handle.
class UnsupportedError : public OutOfScopeError {
public:
    using OutOfScopeError::OutOfScopeError;
};

/// Exponent off the (Z + mu)/h grid of the relevant component.
class IncompatibleExponentError : public Error {
public:
    using Error::Error;
};

/// A truncation trend that does not shrink, or quadrature that does not settle.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// omega_w evaluated at two sample points disagrees.
class NumericalPathologyError : public Error {
public:
    using Error::Error;
};

}  // namespace radsum
