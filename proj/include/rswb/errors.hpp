#pragma once

#include <stdexcept>
#include <string>

namespace rswb {

// Exit-code contract used by the CLI:
//   2 = rejected input, 3 = quadrature/series failed to converge,
//   4 = required data missing or unreadable.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Result left the representable range (e.g. incomplete gamma far outside the
// usable domain). A subtype of ConvergenceError so callers that only care
// about "numerics gave up" can catch one type.
struct OverflowError : ConvergenceError {
    explicit OverflowError(const std::string& msg) : ConvergenceError(msg) {}
};

// Evaluation requested at (or too close to) a pole of the function.
struct PoleError : ValidationError {
    explicit PoleError(const std::string& msg) : ValidationError(msg) {}
};

// Two mathematically equivalent internal routes disagreed. Always a bug.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace rswb
