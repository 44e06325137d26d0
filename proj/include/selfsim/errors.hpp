#pragma once

#include <stdexcept>
#include <string>

namespace selfsim {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A grid time was <= 0 where a strictly positive time is required.
struct NonPositiveTime : Error { using Error::Error; };
// A self-similarity / Hurst index was outside its admissible range.
struct InvalidIndex : Error { using Error::Error; };
// A rescaling constant was <= 0.
struct InvalidScale : Error { using Error::Error; };
// Sample grids do not line up (or a requested grid time is missing).
struct GridMismatch : Error { using Error::Error; };
struct InsufficientSamples : Error { using Error::Error; };
// Covariance kernel matrix numerically indefinite beyond tolerance.
struct FactorizationFailure : Error { using Error::Error; };
// Grid is not symmetric under t -> 1 - t.
struct AsymmetricGrid : Error { using Error::Error; };
// Stability exponent outside (0,1) u (1,2).
struct InvalidAlpha : Error { using Error::Error; };
// alpha > 1 requires a symmetric spectral measure.
struct AsymmetricMeasure : Error { using Error::Error; };
// A planar point came closer to the origin than the winding guard allows.
struct OriginTooClose : Error { using Error::Error; };
// Consecutive angular increment reached pi; grid too coarse to unwrap.
struct AmbiguousStep : Error { using Error::Error; };
struct TimeNotOnGrid : Error { using Error::Error; };
struct EmptySample : Error { using Error::Error; };
// Bad file content (CSV paths, experiment configs).
struct MalformedInput : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace selfsim
