#pragma once

#include <stdexcept>
#include <string>

namespace wgnls {

/// Base class for all library errors. Anything derived from this signals a
/// problem with inputs or with the numerical state, never a programming bug.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// geometry
struct ClosureViolation : Error { using Error::Error; };
struct NonUnitSpeed : Error { using Error::Error; };
struct EpsilonOutOfRange : Error { using Error::Error; };
struct DegenerateMetric : Error { using Error::Error; };
struct SelfIntersection : Error { using Error::Error; };
struct GeometryUnavailable : Error { using Error::Error; };

// fields and transforms
struct SizeMismatch : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

// time integration
struct NonFiniteState : Error { using Error::Error; };
struct MassDriftExceeded : Error { using Error::Error; };
struct StepRejected : Error { using Error::Error; };

// harness
struct ConfigError : Error { using Error::Error; };
struct ResolutionInsufficient : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace wgnls
