#pragma once

#include <stdexcept>
#include <string>

namespace aoilab {

// Bad or missing configuration input. CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A requested operating point cannot be met (e.g. power budget below the
// minimum achievable average power). CLI maps this to exit code 3.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace aoilab
