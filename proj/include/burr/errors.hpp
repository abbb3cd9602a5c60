#pragma once

#include <stdexcept>
#include <string>

namespace burr {

/// Invalid distribution parameters (zero, negative or non-finite).
class parameter_error : public std::invalid_argument {
public:
    explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

/// Numerical failure (non-convergence, divergence); message carries diagnostics.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Operation not defined for the requested family member.
class unsupported_member_error : public std::invalid_argument {
public:
    explicit unsupported_member_error(const std::string& what) : std::invalid_argument(what) {}
};

} // namespace burr
