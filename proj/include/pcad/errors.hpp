#pragma once

#include <stdexcept>
#include <string>

namespace pcad {

// Configuration problems (bad flags, inconsistent parameters). CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Input data problems (malformed files, degenerate signals). CLI exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Training could not produce a model (alpha escalation exhausted). CLI exit code 4.
struct TrainingFailure : std::runtime_error {
    explicit TrainingFailure(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pcad
