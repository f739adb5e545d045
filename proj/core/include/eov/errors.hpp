#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace eov {

enum class Stage { Execute, Order, Validate };

const char* stage_name(Stage stage);

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Offered load meets or exceeds service capacity; no steady state exists.
class UnstableQueue : public Error {
public:
    explicit UnstableQueue(double utilization,
                           std::optional<Stage> stage = std::nullopt);

    double utilization() const { return utilization_; }
    std::optional<Stage> stage() const { return stage_; }

private:
    double utilization_;
    std::optional<Stage> stage_;
};

// Zero arrival rate fed to an expression that is singular there.
class DegenerateLoad : public Error {
public:
    using Error::Error;
};

// Operation defined for point-to-point links only.
class FanoutNotSupported : public Error {
public:
    using Error::Error;
};

// Scenario text could not be read as key = value lines.
class ParseError : public Error {
public:
    ParseError(const std::string& origin, int line, const std::string& what);

    int line() const { return line_; }

private:
    int line_;
};

// Scenario parsed but violates a field invariant.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& field, const std::string& what);

    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class EmptyTrace : public Error {
public:
    using Error::Error;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

class ZeroMean : public Error {
public:
    using Error::Error;
};

} // namespace eov
