// Error taxonomy shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace reuler {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };       // invalid thermodynamic inputs
struct SonicError : Error { using Error::Error; };        // state not (or no longer) supersonic
struct RangeError : Error { using Error::Error; };        // reactant fraction left [0,1]
struct IntegrationError : Error { using Error::Error; };  // rarefaction ODE step failure
struct NoRootError : Error { using Error::Error; };       // shock density bracket failed
struct NoConvergence : Error { using Error::Error; };     // Newton iteration failed
struct DegenerateJacobian : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };      // reaction substep inadmissible
struct CFLViolation : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct MissingWaveData : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct MaxIterations : Error { using Error::Error; };
struct NoContraction : Error { using Error::Error; };
struct SolverError : Error { using Error::Error; };       // internal consistency failure

}  // namespace reuler
