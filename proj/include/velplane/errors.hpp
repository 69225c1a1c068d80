#pragma once

#include <stdexcept>
#include <string>

namespace velplane {

// Bad or unreadable input data (files, rows, series that cannot be used).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A parameter or value violates a documented precondition.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace velplane
