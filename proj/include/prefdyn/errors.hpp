#pragma once

#include <stdexcept>
#include <string>

namespace prefdyn {

/// Thrown when a rejection-sampling loop runs out of attempts. Carries the
/// number of attempts made so callers can report it or retune parameters.
struct RetryExhaustedError : std::runtime_error {
    RetryExhaustedError(const std::string& what_arg, int attempts_made)
        : std::runtime_error(what_arg), attempts(attempts_made) {}

    int attempts;
};

}  // namespace prefdyn
