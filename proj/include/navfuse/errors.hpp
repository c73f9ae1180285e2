#pragma once

#include <stdexcept>
#include <string>

namespace navfuse {

// Malformed input file or config.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Every candidate path is blocked; the caller should trigger recovery.
class NoPathError : public std::runtime_error {
 public:
  explicit NoPathError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace navfuse
