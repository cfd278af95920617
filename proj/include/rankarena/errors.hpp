#pragma once

#include <stdexcept>
#include <string>

namespace rankarena {

// Error taxonomy mirrored by the CLI exit codes: config 2, data 3, transport 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or unresolvable run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Violated domain preconditions or malformed input data.
class DataError : public Error {
public:
    using Error::Error;
};

// External service unreachable after bounded retries.
class TransportError : public Error {
public:
    using Error::Error;
};

} // namespace rankarena
