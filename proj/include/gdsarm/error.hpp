#pragma once

#include <stdexcept>
#include <string>

namespace gdsarm {

/// Bad input: malformed files, out-of-range indices, invalid configuration.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation could not produce a usable answer (rank deficiency, LP failure, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gdsarm
