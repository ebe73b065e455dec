#pragma once

#include <stdexcept>
#include <string>

namespace speclocal {

/// Malformed or unreadable input (files, records, configs). Maps to exit code 1.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (eigensolver breakdown, degenerate degrees). Maps to exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace speclocal
