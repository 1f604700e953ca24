#pragma once

#include <stdexcept>
#include <string>

namespace mobo {

// A caller broke a documented precondition (dimension mismatch, invalid
// argument range, malformed input).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical routine gave up (factorization failed at maximum jitter,
// non-finite value encountered).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent configuration / persisted experiment state.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A black-box objective evaluation failed (child process died, malformed
// response, timeout).
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mobo
