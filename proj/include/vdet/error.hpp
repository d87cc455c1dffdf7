#pragma once

#include <stdexcept>
#include <string>

namespace vdet {

enum class ErrorKind { config, numerical, physics };

/// Base for every error raised by the library. The kind drives the CLI exit code.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

/// A physically meaningful condition that prevents the requested analysis,
/// e.g. a field strong enough to remove the tunneling barrier.
class PhysicsFlag : public Error {
public:
  explicit PhysicsFlag(const std::string& what) : Error(ErrorKind::physics, what) {}
};

}  // namespace vdet
