#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mzi {

enum class ErrorKind {
  InvalidArgument,
  DensityUndefined,
  EndpointSingular,
  QuadratureNoConvergence,
  InvalidParticleCount,
  ConfigInvalid,
  ParseFailure,
  TooFewSamples,
  IoFailure,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DensityUndefined: return "DensityUndefined";
    case ErrorKind::EndpointSingular: return "EndpointSingular";
    case ErrorKind::QuadratureNoConvergence: return "QuadratureNoConvergence";
    case ErrorKind::InvalidParticleCount: return "InvalidParticleCount";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::ParseFailure: return "ParseFailure";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mzi
