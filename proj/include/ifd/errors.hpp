#pragma once

#include <stdexcept>
#include <string>

namespace ifd {

// Precondition or domain violation on an argument (bad level index, N = 0,
// probability outside [0, 1], ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical check failed: unitarity, trace drift, truncation leakage.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// A ratio was requested whose denominator is zero.
class UndefinedRatioError : public DomainError {
public:
    explicit UndefinedRatioError(const std::string& what) : DomainError(what) {}
};

// Experiment configuration could not be parsed or validated.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ifd
