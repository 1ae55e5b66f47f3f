#pragma once

#include <stdexcept>
#include <string>

namespace freqdec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad magic, malformed header.
class FormatError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

// Payload shorter or longer than the header promises.
class LengthError : public Error {
public:
    using Error::Error;
};

// Dimensions too small, odd where even is required, kernel too large.
class SizeError : public Error {
public:
    using Error::Error;
};

// Mismatched shapes between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Operation called in the wrong lifecycle state (e.g. masking twice).
class StateError : public Error {
public:
    using Error::Error;
};

// Non-finite values or divergence.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace freqdec
