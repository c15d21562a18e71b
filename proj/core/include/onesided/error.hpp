#pragma once

#include <stdexcept>
#include <string>

namespace onesided {

/// Invalid parameters, unknown identifiers, or inconsistent inputs.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Missing files, unreadable or malformed interchange data.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace onesided
