#pragma once

#include <stdexcept>
#include <string>

namespace rsgeo {

// Error taxonomy shared across the library. Each class maps to one
// failure mode so callers can catch precisely; the CLI maps them to
// exit codes and an error-class string.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QueryOutOfRange : Error { using Error::Error; };
struct InsufficientSamples : Error { using Error::Error; };
struct BehindCamera : Error { using Error::Error; };
struct NonPositiveDepth : Error { using Error::Error; };
struct OutOfBounds : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct DegenerateRays : Error { using Error::Error; };
struct NegativeDepth : Error { using Error::Error; };
struct EmptyOverlap : Error { using Error::Error; };
struct CoverageGap : Error { using Error::Error; };
struct AlreadyInCameraFrame : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct DegenerateGeometry : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace rsgeo
