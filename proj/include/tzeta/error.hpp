#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tzeta {

enum class ErrorKind {
  InvalidArgument,
  InvalidFan,
  Unbounded,
  InsufficientSamples,
  InconsistentSamples,
  ValidationFailed,
  InsufficientTruncation,
  InsufficientPrecision,
  Pole,
  NotIncreasing,
  ThresholdExceeded,
  Unsupported,
  Parse,
  Certification,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for every library failure; the kind drives the CLI
// error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tzeta
