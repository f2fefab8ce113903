#pragma once

#include <stdexcept>
#include <string>

namespace aalsim {

/// Invalid user-supplied configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Broken internal invariant. Reaching one of these is a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Misuse of an API or CLI (unknown preset name, empty input).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace aalsim
