#pragma once

#include <stdexcept>
#include <string>

namespace glp {

// Bad user input: out-of-range parameters, unknown scenario names, malformed
// flags. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Data that parsed but cannot be tested: single group, degenerate groups,
// constant-only features, unreadable files. CLI maps this to exit code 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure inside a solver (eigendecomposition, isolated vertex).
// CLI maps this to exit code 1.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// No feature of the dataset admits a basis function at the requested order.
// Charts catch this subtype to skip a component instead of aborting.
class EmptyFeatureMapError : public DataError {
public:
    explicit EmptyFeatureMapError(const std::string& msg) : DataError(msg) {}
};

}  // namespace glp
