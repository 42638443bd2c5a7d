#pragma once

#include <stdexcept>
#include <string>

namespace mcmccert {

// Base class for all toolkit errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad inputs: violated preconditions, malformed files, inconsistent options.
struct validation_error : error {
    using error::error;
};

// Numerically infeasible: underflow/overflow/empty feasible set where a finite
// answer was required.
struct numeric_error : error {
    using error::error;
};

// A verification run (self-check suite) failed.
struct verification_error : error {
    using error::error;
};

}  // namespace mcmccert
