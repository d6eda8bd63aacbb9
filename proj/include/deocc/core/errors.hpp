#pragma once

#include <stdexcept>
#include <string>

namespace deocc {

// Bad input, configuration or shape. The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// No occluder placement reached the requested ratio within tolerance.
class PlacementError : public std::runtime_error {
 public:
  explicit PlacementError(const std::string& what) : std::runtime_error(what) {}
};

// Missing or malformed files on disk (datasets, checkpoints, images).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace deocc
