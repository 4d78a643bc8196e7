#pragma once

#include <stdexcept>
#include <string>

namespace mcgehee {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: dimension mismatch, bad multi-index, bad config value.
class InputError : public Error {
public:
    using Error::Error;
};

/// The zero germ has no first non-zero jet.
class NoJetError : public Error {
public:
    NoJetError() : Error("germ is identically zero: no non-zero jet") {}
};

/// A LagrangianSystem invariant does not hold.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A point lies outside the ball of radius r_E.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Singular metric or another pointwise numerical failure.
class NumericError : public Error {
public:
    using Error::Error;
};

/// to_mcgehee called at x = 0, whose preimage is the whole boundary.
class BlowupPointError : public Error {
public:
    BlowupPointError() : Error("x = 0 has no McGehee representative: its preimage is the whole boundary") {}
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A postcondition-style contract on the input data failed (e.g. point not critical).
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// A fixed point with nu* = 0 has no hyperbolic linearization.
class NotHyperbolicError : public Error {
public:
    using Error::Error;
};

/// The magnetism hypothesis required by a criterion fails.
class HypothesisError : public Error {
public:
    using Error::Error;
};

}  // namespace mcgehee
