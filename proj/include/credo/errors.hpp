#pragma once

#include <stdexcept>
#include <string>

namespace credo {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs whose shapes do not agree (row widths, table sizes, label counts).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A problem exceeds a hard size bound (vertex-enumeration dimension,
/// hull combination count, partition enumeration).
class SizeLimitError : public Error {
public:
    using Error::Error;
};

/// The solver could not certify optimality, infeasibility or unboundedness.
class NumericalError : public Error {
public:
    using Error::Error;
};

class UnboundedError : public Error {
public:
    using Error::Error;
};

/// A constraint system or a conditioned set turned out to be empty.
class EmptySetError : public Error {
public:
    using Error::Error;
};

class ZeroProbabilityError : public Error {
public:
    using Error::Error;
};

/// An equilibrium certificate has a residual above the accepted tolerance.
class CertificateError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent user input (scenario files, CLI arguments).
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace credo
