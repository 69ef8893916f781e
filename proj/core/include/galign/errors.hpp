#pragma once

#include <stdexcept>
#include <string>

namespace galign {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A matrix that must be positive definite is not (Cholesky factorization failed).
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

// A covariance model violates joint validity (negative eigenvalue beyond
// tolerance, or correlation at or beyond 1).
class NotValidJoint : public Error {
public:
    using Error::Error;
};

// A scalar argument lies outside the operation's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Matrix or vector dimensions do not line up.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// A structured argument (mapping, estimate, score matrix) has an invalid shape.
class ShapeError : public Error {
public:
    using Error::Error;
};

// A requested size is impossible (e.g. mapping larger than either side).
class SizeError : public Error {
public:
    using Error::Error;
};

// Two arguments that must have equal size do not.
class SizeMismatch : public Error {
public:
    using Error::Error;
};

// An exact/brute-force routine was asked to run beyond its instance guard.
class TooLarge : public Error {
public:
    using Error::Error;
};

// An experiment configuration is inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

// The requested signal level is not reachable with correlations below 1.
class InfeasibleRho : public Error {
public:
    using Error::Error;
};

// An aggregation was given no records.
class EmptyInput : public Error {
public:
    using Error::Error;
};

// A file could not be opened or written.
class IoError : public Error {
public:
    using Error::Error;
};

// A text input could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace galign
