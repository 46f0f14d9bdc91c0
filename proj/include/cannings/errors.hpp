#ifndef CANNINGS_ERRORS_HPP
#define CANNINGS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cannings {

inline constexpr const char* kVersion = "0.1.0";

// invalid configuration or violated model invariant (CLI exit code 1)
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// enumeration or population cap exceeded (CLI exit code 2)
struct CapError : std::runtime_error {
    explicit CapError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cannings

#endif
