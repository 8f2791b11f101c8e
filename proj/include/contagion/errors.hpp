#pragma once

#include <stdexcept>
#include <string>

namespace contagion {

/// Invalid or out-of-range configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Valid configuration whose placement constraints could not be satisfied.
class InfeasibleConfig : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Caller broke an API precondition, e.g. stepping a finished episode.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace contagion
