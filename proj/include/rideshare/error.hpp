#pragma once

#include <stdexcept>
#include <string>

namespace rideshare {

// Base for every error the library raises on bad input or a broken invariant.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised for malformed configs and arguments (CLI maps it to exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A simulation invariant (capacity, detour, plan consistency) was violated.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace rideshare
