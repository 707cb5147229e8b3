#pragma once

#include <stdexcept>
#include <string>

namespace pwc {

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Base for numerical failures (exit code 3 in the CLI).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CaptureError : NumericalError {
    using NumericalError::NumericalError;
};

struct NoCrossingError : NumericalError {
    using NumericalError::NumericalError;
};

struct ConvergenceError : NumericalError {
    using NumericalError::NumericalError;
};

} // namespace pwc
