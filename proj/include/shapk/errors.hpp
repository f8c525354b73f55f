#pragma once

#include <stdexcept>
#include <string>

namespace shapk {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments, invalid configuration, unsupported combinations.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Unreadable or malformed input files (models, CSVs, suites).
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

// Estimator-level failures: non-finite replicates, degenerate samples.
class EstimatorError : public Error {
public:
    explicit EstimatorError(const std::string& msg) : Error(msg) {}
};

}  // namespace shapk
