#ifndef SINIR_ERRORS_HPP
#define SINIR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sinir {

// Base for everything thrown by this library. The CLI maps any Error to a
// nonzero exit with a one-line diagnostic.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid tensor dimensions (zero or negative size, image smaller than a window).
struct DimensionError : Error {
    using Error::Error;
};

// Two tensors that must agree in shape do not.
struct ShapeError : Error {
    using Error::Error;
};

// Out-of-range or otherwise unusable argument value.
struct ParameterError : Error {
    using Error::Error;
};

// Operation attempted without its prerequisite state (e.g. backward without forward).
struct StateError : Error {
    using Error::Error;
};

// File could not be read or written.
struct IoError : Error {
    using Error::Error;
};

// File exists but its contents are not what we expect.
struct FormatError : Error {
    using Error::Error;
};

}  // namespace sinir

#endif
