#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plagate {

// Base of every error the toolkit raises for bad input, bad configuration or
// violated preconditions. Anything else escaping a command is an internal bug.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& detail, const std::string& file = {})
        : Error((file.empty() ? "line " : file + ":") + std::to_string(line) + ": " + detail),
          line_(line), detail_(detail) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

// Caller broke an operation's precondition (wrong vector length, bad index, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

// A parameter is outside its physical or mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

class SingularParameterError : public DomainError {
public:
    using DomainError::DomainError;
};

class NoSolutionError : public Error {
public:
    NoSolutionError(const std::string& what, double residual_low, double residual_high)
        : Error(what), residual_low_(residual_low), residual_high_(residual_high) {}

    double residual_low() const noexcept { return residual_low_; }
    double residual_high() const noexcept { return residual_high_; }

private:
    double residual_low_;
    double residual_high_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

class ReportShapeError : public Error {
public:
    using Error::Error;
};

class UnsupportedOperationError : public Error {
public:
    using Error::Error;
};

class StabilityError : public Error {
public:
    StabilityError(const std::string& what, double max_timestep)
        : Error(what), max_timestep_(max_timestep) {}

    // Largest timestep that would have been accepted.
    double max_timestep() const noexcept { return max_timestep_; }

private:
    double max_timestep_;
};

class TimeoutError : public Error {
public:
    TimeoutError(const std::string& what, double final_voltage)
        : Error(what), final_voltage_(final_voltage) {}

    double final_voltage() const noexcept { return final_voltage_; }

private:
    double final_voltage_;
};

}  // namespace plagate
