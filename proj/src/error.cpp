#include "tzeta/error.hpp"

namespace tzeta {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::InvalidFan: return "invalid_fan";
    case ErrorKind::Unbounded: return "unbounded_polytope";
    case ErrorKind::InsufficientSamples: return "insufficient_samples";
    case ErrorKind::InconsistentSamples: return "inconsistent_samples";
    case ErrorKind::ValidationFailed: return "validation_failed";
    case ErrorKind::InsufficientTruncation: return "insufficient_truncation";
    case ErrorKind::InsufficientPrecision: return "insufficient_precision";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::NotIncreasing: return "not_increasing";
    case ErrorKind::ThresholdExceeded: return "threshold_exceeded";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Parse: return "parse_error";
    case ErrorKind::Certification: return "certification_failed";
  }
  return "unknown";
}

}  // namespace tzeta
