#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace restrictlab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An evaluation policy cannot reach the requested accuracy.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate)
        : std::runtime_error(what), estimate_(estimate) {}
    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// A quadrature did not converge within its budget. Carries the last error estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Mismatched lengths or unsupported sizes.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A least-squares fit could not be formed or is of insufficient quality.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration; `field` names the offending entry.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A checked inequality failed. `instance` holds a serialized reproducer.
class VerificationError : public std::runtime_error {
public:
    VerificationError(const std::string& what, std::string instance = {})
        : std::runtime_error(what), instance_(std::move(instance)) {}
    const std::string& instance() const noexcept { return instance_; }

private:
    std::string instance_;
};

}  // namespace restrictlab
