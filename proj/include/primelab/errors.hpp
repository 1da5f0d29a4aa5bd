#pragma once

#include <stdexcept>
#include <string>

namespace primelab {

// Raised when a requested computation would violate the finite-model
// contract (aliasing, overlapping arcs, invalid grids).
struct ModelError : std::runtime_error {
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a request exceeds a hard resource cap (sieve size, grid
// memory, refinement budget).
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace primelab
