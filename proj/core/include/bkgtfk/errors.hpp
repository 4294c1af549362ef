#pragma once

#include <stdexcept>
#include <string>

namespace bkgtfk {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (e.g. log of a non-positive rate).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Caller passed structurally invalid input (mismatched lengths, too few nodes, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

// A computation produced a non-finite value.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace bkgtfk
