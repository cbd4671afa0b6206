#pragma once

#include <stdexcept>
#include <string>

namespace congcount {

// Thrown when an input would exceed a configured table size or work budget.
// Callers are expected to fall back to a slower path or shrink the request.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File-level failure; what() carries the offending path.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg, const std::string& path)
        : std::runtime_error(msg + ": " + path), path(path) {}
    std::string path;
};

} // namespace congcount
