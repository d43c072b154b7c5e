#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Input data is malformed (non-finite values, bad shapes).
class DataError : public Error {
public:
    using Error::Error;
};

/// An internal identity failed; indicates a bug.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    CalibrationError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// A constructive step (bump, far-field sweep, T_theta search) did not certify.
class ConstructionError : public Error {
public:
    ConstructionError(const std::string& what, double worst_x, double worst_value)
        : Error(what), worst_x_(worst_x), worst_value_(worst_value) {}
    double worst_x() const { return worst_x_; }
    double worst_value() const { return worst_value_; }

private:
    double worst_x_;
    double worst_value_;
};

/// The time step produced values outside the admissible box.
class StabilityError : public Error {
public:
    StabilityError(const std::string& what, double offending_value)
        : Error(what), value_(offending_value) {}
    double value() const { return value_; }

private:
    double value_;
};

/// The requested barrier has an empty validity window.
class WindowError : public Error {
public:
    WindowError(const std::string& what, double lo, double hi)
        : Error(what), lo_(lo), hi_(hi) {}
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    double lo_;
    double hi_;
};

/// Configuration file problems; `field` names the offending entry.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

}  // namespace fraclab
