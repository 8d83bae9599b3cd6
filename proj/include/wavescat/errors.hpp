#pragma once

#include <stdexcept>
#include <string>

namespace wavescat {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument to an operation (misaligned lengths, bad ranges, ...).
class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& msg) : Error(msg) {}
};

/// Experiment configuration is malformed or fails schema validation.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// A numerical procedure failed to reach its tolerance.
class NumericalError : public Error {
public:
    NumericalError(const std::string& msg, double achieved = 0.0)
        : Error(msg), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

/// Adaptive quadrature did not converge; carries the achieved tolerance.
class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// ODE step size underflowed; carries the location where it happened.
class StiffnessError : public NumericalError {
public:
    StiffnessError(const std::string& msg, double at_time)
        : NumericalError(msg), location(at_time) {}
    double location;
};

/// Picard/Neumann iteration failed to converge within kmax.
class SeriesDivergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A declared hypothesis is contradicted by sampled values.
class ValidationError : public Error {
public:
    ValidationError(const std::string& msg, double witness_t)
        : Error(msg), witness(witness_t) {}
    double witness;
};

/// Operation invoked outside its regime precondition.
class RegimeError : public Error {
public:
    explicit RegimeError(const std::string& msg) : Error(msg) {}
};

/// Domain restriction violated (e.g. kernel-mode data where excluded).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// det N1 <= 0 inside the hyperbolic zone: the zone constant is too small.
class ZoneConstantError : public Error {
public:
    explicit ZoneConstantError(const std::string& msg) : Error(msg) {}
};

/// Two independent computation paths disagree beyond combined tolerance.
class InconsistencyError : public Error {
public:
    explicit InconsistencyError(const std::string& msg) : Error(msg) {}
};

}  // namespace wavescat
