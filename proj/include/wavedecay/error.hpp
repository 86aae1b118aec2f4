#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wavedecay {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A precondition of an operation does not hold. The message names the
/// violated hypothesis (e.g. "(A-1)", "R > L").
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

/// Invalid experiment configuration; `field` is the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : Error(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Non-finite value produced by the time stepper.
class InstabilityError : public Error {
 public:
  InstabilityError(std::size_t step, double t)
      : Error("non-finite field value at step " + std::to_string(step) +
              " (t = " + std::to_string(t) + ")"),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Grid would exceed the configured memory cap.
class ResourceError : public Error {
 public:
  ResourceError(std::size_t required_bytes, std::size_t cap_bytes)
      : Error("grid requires " + std::to_string(required_bytes / (1024 * 1024)) +
              " MiB, cap is " + std::to_string(cap_bytes / (1024 * 1024)) + " MiB"),
        required_(required_bytes) {}
  std::size_t required_bytes() const { return required_; }

 private:
  std::size_t required_;
};

}  // namespace wavedecay
