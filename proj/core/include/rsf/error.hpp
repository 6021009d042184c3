#pragma once

#include <stdexcept>
#include <string>

namespace rsf {

// Base class for all library failures. The CLI maps these to exit code 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input data or violated dataset invariants.
struct DataError : Error {
    using Error::Error;
};

// Unreadable, truncated, or wrong-version files.
struct FormatError : Error {
    using Error::Error;
};

}  // namespace rsf
