#pragma once

#include <stdexcept>
#include <string>

namespace rcd {

// Precondition or schema violation (bad probabilities, malformed config, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure (factorization did not converge, variance clamp too large).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File / parse failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rcd
