#pragma once

#include <stdexcept>
#include <string>

namespace ccbell {

// Malformed or inconsistent input (bad schema, failed invariant, label mismatch).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A computational size guard refused to run (enumeration too large, dimension too big).
class GuardExceeded : public std::runtime_error {
public:
    explicit GuardExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ccbell
