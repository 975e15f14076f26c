#pragma once

#include <stdexcept>
#include <string>

namespace snrlab {

// Bad user input: out-of-domain parameters, malformed files, violated model
// assumptions. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A computation that started from valid inputs could not be completed
// (lost positivity, no convergence, left a function's domain). The CLI maps
// this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace snrlab
