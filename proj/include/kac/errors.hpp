#pragma once

#include <stdexcept>
#include <string>

namespace kac {

// Bad or inconsistent user-supplied configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical routine failed to reach its accuracy target (CLI exit code 3).
struct NumericFailure : std::runtime_error {
    NumericFailure(const std::string& msg, double residual)
        : std::runtime_error(msg + " (residual " + std::to_string(residual) + ")"),
          residual(residual) {}
    double residual;
};

} // namespace kac
