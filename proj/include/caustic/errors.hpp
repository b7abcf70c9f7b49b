#pragma once

#include <stdexcept>
#include <string>

namespace caustic {

// Base for all library errors so callers can catch one type.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violation on an input value.
struct domain_error : error {
    using error::error;
};

// Iterative method failed to converge; carries the last residual.
struct numeric_error : error {
    double residual;
    numeric_error(const std::string& msg, double res) : error(msg), residual(res) {}
};

// Geometric construction impossible (bracket failure, non-convexity, bad chart branch).
struct geometry_error : error {
    using error::error;
};

// Internal structural assumption violated; indicates data inconsistent with the
// graded-matrix model rather than a caller mistake.
struct structural_error : error {
    using error::error;
};

// Search/optimizer failed from the given start.
struct search_error : error {
    using error::error;
};

// Input/output failure (file missing, unwritable path).
struct io_error : error {
    using error::error;
};

}  // namespace caustic
