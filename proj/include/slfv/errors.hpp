#pragma once

#include <stdexcept>
#include <string>

namespace slfv {

/// Invalid configuration (bad parameter combination, schema violation).
/// The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument to an operation (out-of-range input value).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Event geometry incompatible with the periodic domain (radius > L/4).
struct domain_violation : std::runtime_error {
    explicit domain_violation(const std::string& msg) : std::runtime_error(msg) {}
};

/// Requested scale finer than the grid can resolve.
struct resolution_error : std::runtime_error {
    explicit resolution_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace slfv
