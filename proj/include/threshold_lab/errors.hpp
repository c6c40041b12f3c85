#pragma once

#include <stdexcept>
#include <string>

namespace tlab {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A potential fails the structural W^1_2 membership check (jump at a breakpoint
/// or nonzero value at a support endpoint).
class NotW12 : public Error {
public:
    NotW12(const std::string& what, double jump) : Error(what), jump_(jump) {}
    double jump() const { return jump_; }

private:
    double jump_;
};

/// Requested lambda lies outside a tabulated scaling family.
class OutOfTable : public Error {
public:
    using Error::Error;
};

/// The adaptive ODE step controller underflowed its step size.
class StepFailure : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature failed to converge.
class QuadratureFailure : public Error {
public:
    using Error::Error;
};

/// Root bracketing failed: the function has the same sign at both endpoints.
class NoBracket : public Error {
public:
    using Error::Error;
};

/// A theorem's hypotheses fail in a way that prevents the construction
/// (e.g. a quasimode with k_lambda <= 0 has no decaying tails).
class ConditionsViolated : public Error {
public:
    using Error::Error;
};

/// V is not continuous at the origin (required by the alpha->0 theorem).
class DiscontinuousAtZero : public Error {
public:
    using Error::Error;
};

/// Malformed configuration or input file.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Too few data points for a fit.
class InsufficientData : public Error {
public:
    using Error::Error;
};

} // namespace tlab
