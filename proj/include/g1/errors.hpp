#pragma once
#include <stdexcept>
#include <string>

namespace g1 {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments: violated preconditions, unsupported shapes.
struct argument_error : error {
    using error::error;
};

// Text/JSON input that does not parse; carries a byte position.
struct parse_error : error {
    std::size_t pos;
    parse_error(const std::string& msg, std::size_t at)
        : error(msg + " (at position " + std::to_string(at) + ")"), pos(at) {}
};

// Model with vanishing discriminant where a nonsingular one is required.
struct singular_model_error : error {
    singular_model_error() : error("singular model (Delta = 0)") {}
    explicit singular_model_error(const std::string& msg) : error(msg) {}
};

// An internal consistency check failed; indicates an arithmetic bug,
// never a recoverable condition.
struct invariant_violation_error : error {
    using error::error;
};

// Floating point pipeline failed to reach its tolerance.
struct numeric_error : error {
    using error::error;
};

// Factorisation gave up within the configured budget; message lists the
// unfactored cofactor.
struct factor_budget_error : error {
    using error::error;
};

struct internal_error : error {
    using error::error;
};

} // namespace g1
