#pragma once

#include <stdexcept>
#include <string>

namespace swarmlab {

// Thrown on malformed configuration or bad arguments (CLI exit code 2).
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a computation produces non-finite values (CLI exit code 3).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a problem exceeds a documented size cap (CLI exit code 4).
struct size_cap_error : std::runtime_error {
    explicit size_cap_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace swarmlab
