#pragma once

#include <stdexcept>
#include <string>

namespace fes {

// Base class for all library errors. Catching fes::Error at the CLI boundary
// separates domain failures (exit code 2 when partial, 1 when fatal) from bugs.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// umps
struct DegenerateDominantEigenvalue : Error { using Error::Error; };
struct EigensolverNoConvergence : Error { using Error::Error; };
struct KTooLarge : Error { using Error::Error; };

// isolve
struct InitDimensionMismatch : Error { using Error::Error; };
struct NonHermitianHamiltonian : Error { using Error::Error; };

// observables
struct OverlapError : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct UnsupportedLevel : Error { using Error::Error; };
struct NonPositiveFixedPoint : Error { using Error::Error; };
struct BondDimensionTooLarge : Error { using Error::Error; };

// fes analysis
struct InsufficientPoints : Error { using Error::Error; };
struct ScaleOutOfRange : Error { using Error::Error; };
struct NoCoupling : Error { using Error::Error; };
struct InversionOutOfRange : Error { using Error::Error; };

// cli / io
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace fes
