#pragma once

#include <stdexcept>
#include <string>

namespace leadlag {

// Bad run configuration: unknown key, malformed value, invalid flag combination.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Bad or insufficient input data: missing file, malformed CSV, validation failure.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace leadlag
