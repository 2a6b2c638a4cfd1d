#pragma once

#include <stdexcept>
#include <string>

namespace rainsim {

// Data failed a semantic check (non-finite coordinate, missing label,
// degenerate geometry). Maps to exit code 1 in the CLI.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// File could not be read/written or has a malformed layout. Maps to
// exit code 2 in the CLI, like argument errors.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rainsim
