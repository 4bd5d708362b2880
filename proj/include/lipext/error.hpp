#pragma once

#include <stdexcept>
#include <string>

namespace lipext {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad matrix, bad index, bad flag).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not produce a trustworthy answer
/// (singular system, non-convergence, failed internal identity).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Lip(f) is +inf: two distinct domain points at source distance zero
/// have distinct images.
class InfiniteLipschitzError : public Error {
public:
    using Error::Error;
};

} // namespace lipext
