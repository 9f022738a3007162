#pragma once

#include <stdexcept>
#include <string>

namespace shufreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid dimensions, out-of-range parameters, violated preconditions.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Malformed instance file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Well-formed file whose contents disagree with the instance schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A floating-point computation hit a singular or unstable configuration.
class NumericError : public Error {
public:
    using Error::Error;
};

/// An internal invariant was breached (a bug or a numerical failure that the
/// analysis rules out).
class InternalInvariantError : public Error {
public:
    using Error::Error;
};

/// An exhaustive routine was asked to run above its enumeration cap.
class RefusalError : public Error {
public:
    using Error::Error;
};

/// The enumeration budget of the approximation scheme would be exceeded.
class BudgetExceededError : public Error {
public:
    using Error::Error;
};

/// Exact rank check failed (the covariate matrix is rank deficient).
class RankError : public Error {
public:
    using Error::Error;
};

/// Every response is zero, so every permutation fits.
class DegenerateInstanceError : public Error {
public:
    using Error::Error;
};

}  // namespace shufreg
