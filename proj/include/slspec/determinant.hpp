#pragma once

#include <cstddef>
#include <vector>

#include "slspec/bc_model.hpp"
#include "slspec/potential.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// Endpoint values of the oscillatory basis pair y1, y2 of -y'' + q y = mu^2 y
/// with y1(0) = 1, y1'(0) = i mu and y2(0) = 1, y2'(0) = -i mu.
struct EndpointData {
    cplx y1, y1p, y2, y2p;    // values and derivatives at x = 1
    double wronskian_drift;   // |W(1)/W(0) - 1|, W = y1 y2' - y1' y2 = -2 i mu
    std::size_t steps;
};

/// Basis pair sampled on a uniform grid (for eigenfunction assembly).
struct FundamentalPair {
    std::vector<double> x;
    std::vector<cplx> y1, y1p, y2, y2p;
    double wronskian_drift = 0.0;
};

/// Adaptive Dormand-Prince 5(4) integrator for the basis pair. Below
/// |mu| < kEnvelopeSwitch it advances (y, y') directly; above it the
/// phase-factored variables y = a e^{i mu x} + b e^{-i mu x} are advanced,
/// which keeps the local error proportional to |q| / |mu| instead of |mu|.
/// Error control is per unit step: a step is accepted when the embedded
/// estimate is <= tol * h, so the global error stays near tol.
class Integrator {
public:
    static constexpr double kEnvelopeSwitch = 15.0;

    explicit Integrator(Potential q, Tolerances tol = {});

    /// Endpoint data at x = 1. tol_override > 0 relaxes the local tolerance
    /// (used for contour sampling where only the winding matters).
    EndpointData endpoints(cplx mu, double tol_override = 0.0) const;

    /// Basis pair on n_out uniform nodes (n_out odd, >= 3).
    FundamentalPair dense_pair(cplx mu, std::size_t n_out) const;

    /// Output grid size honouring the finite-difference residual check:
    /// smallest odd n >= max(n_min, 48 |mu|).
    static std::size_t recommended_nodes(cplx mu, std::size_t n_min = 257);

    const Potential& potential() const { return q_; }

private:
    Potential q_;
    Tolerances tol_;
};

/// Characteristic determinant from integrated endpoint data:
/// U1(y1) U2(y2) - U1(y2) U2(y1) with the initial values implied by mu.
cplx delta_exact(const EndpointData& e, const BCFunctionals& f, cplx mu);

/// Which closed-form approximant of the determinant to evaluate.
enum class ClosedKind {
    Unperturbed,  // q = 0 determinant (exact when the potential vanishes)
    Leading,      // unperturbed form with the r coefficient shifted by c_mu
};

/// Closed-form determinant for a canonical BC. Leading needs the potential
/// for its cosine moment; passing none throws KindMismatch. Records with
/// adjoint_form are evaluated through their adjoint twin as
/// -(-1)^sigma conj(D_twin(conj mu)); the sign matches delta_exact's layout.
cplx delta_closed(const CanonicalBC& cbc, cplx mu, ClosedKind kind,
                  const Potential* q = nullptr);

/// Leading form plus the first perturbation term i kappa s_mu cos(mu), where
/// kappa depends on family and parity; used as a root-seeding diagnostic.
cplx delta_perturbation(const CanonicalBC& cbc, cplx mu, const Potential& q);

}  // namespace slspec
