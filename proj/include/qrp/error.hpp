#pragma once

#include <stdexcept>
#include <string>

namespace qrp {

// Malformed input to a library call (violated precondition).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Rejected experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failure inside the propagator or eigensolver.
class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem or format failure while persisting artifacts.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qrp
