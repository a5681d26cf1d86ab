#pragma once

#include <stdexcept>
#include <string>

namespace spanse {

// Inconsistent or invalid parameters (mismatched moduli, bad dimensions,
// non-prime q, density that does not sum to one).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed serialized object.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Key generation exhausted its resampling budget.
class KeygenError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Signing exhausted its rejection-sampling budget.
class SignError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spanse
