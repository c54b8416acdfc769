#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace spiral {

/// Base of every error raised by the library. `module()` names the
/// subsystem that raised it so the CLI can tag its diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Query outside the tabulated range of a cache.
class RangeError : public Error {
public:
    using Error::Error;
};

/// The curve does not have the shape an operation requires
/// (no intersection with the previous coil, overlapping arms, ...).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// A standing hypothesis (concavity, d*gamma < 1, ...) failed.
class AssumptionViolation : public Error {
public:
    using Error::Error;
};

/// Spiral width is not monotone on the scanned range.
class NotSimpleError : public Error {
public:
    using Error::Error;
};

/// Iterative numerics did not reach the requested tolerance. Carries the best
/// estimate and its error bound.
class NumericalError : public Error {
public:
    NumericalError(std::string module, const std::string& what, double best = 0.0,
                   double error_bound = 0.0)
        : Error(std::move(module), what), best_(best), error_bound_(error_bound) {}

    double best_estimate() const noexcept { return best_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_;
    double error_bound_;
};

/// Eigensolver returned fewer (or more) eigenvalues than the inertia count.
class MissedEigenvalueError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace spiral
