#pragma once

#include <stdexcept>
#include <string>

namespace iosim {

/// Invalid configuration: bad scenario/table files, missing entries,
/// inconsistent experiment parameters. CLI exit code 2.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Physics or geometry violation: degenerate placement, out-of-range
/// angle, mode/side mismatch. CLI exit code 3.
class DomainError : public std::runtime_error {
  public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem failure while reading inputs or writing artifacts.
/// CLI exit code 4.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace iosim
