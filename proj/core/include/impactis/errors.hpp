#pragma once

#include <stdexcept>
#include <string>

namespace impactis {

// Input or configuration problem attributable to the caller.
// The CLI maps these to exit code 2; anything else reaching main is
// treated as an internal error (exit code 1).
struct UserError : std::runtime_error {
    explicit UserError(const std::string& what) : std::runtime_error(what) {}
};

// A domain record broke one of its invariants.
struct ValidationError : UserError {
    explicit ValidationError(const std::string& what) : UserError(what) {}
};

}  // namespace impactis
