#pragma once

#include <stdexcept>
#include <string>

namespace slspec {

/// Base class for all library failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Boundary-condition model.
struct DegenerateBC : Error { using Error::Error; };
struct NotReducible : Error { using Error::Error; };
struct ViolatesRegularity : Error { using Error::Error; };

// Potential / quadrature.
struct QuadratureFailure : Error { using Error::Error; };
struct UndefinedCondition : Error { using Error::Error; };

// Determinant evaluation.
struct StiffnessFailure : Error { using Error::Error; };
struct KindMismatch : Error { using Error::Error; };

// Root finding.
struct BoundaryZero : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };

// Finite-difference oracle.
struct SingularFactorization : Error { using Error::Error; };

// Eigenfunctions / diagnostics.
struct DegenerateEigenfunction : Error { using Error::Error; };
struct NormViolation : Error { using Error::Error; };
struct ConditionViolated : Error { using Error::Error; };

// CLI configuration; maps to exit code 2, everything above maps to 3.
struct ConfigError : Error { using Error::Error; };

}  // namespace slspec
