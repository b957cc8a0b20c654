#pragma once

#include <stdexcept>
#include <string>

namespace tbci {

// Invalid user input or configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical routine failed to converge or produced an invalid result
// (CLI exit code 2).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tbci
