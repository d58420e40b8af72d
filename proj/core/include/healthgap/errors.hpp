#pragma once

#include <stdexcept>
#include <string>

namespace healthgap {

/// File could not be read, written, or decoded.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Violated precondition, mismatched grids, or invalid configuration.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A statistic was requested over an empty eligible sample.
class EmptySampleError : public std::runtime_error {
public:
    explicit EmptySampleError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace healthgap
