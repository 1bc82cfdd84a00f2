#pragma once

#include <stdexcept>
#include <string>

namespace axionsplit {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical validity bound was crossed (paraxial limit, small-shift
/// expansion limit, ensemble size limit).
class GuardViolation : public std::runtime_error {
public:
    explicit GuardViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent scenario/configuration input.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace axionsplit
