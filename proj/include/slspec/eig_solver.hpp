#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "slspec/asymptotics.hpp"
#include "slspec/bc_model.hpp"
#include "slspec/determinant.hpp"
#include "slspec/potential.hpp"
#include "slspec/rootfind.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// One located eigenvalue. j labels the asymptotic branch inside a window
/// (1 anchored, 2 split); j stays 0 for sweep results and when a window does
/// not resolve into exactly two simple roots. lambda = mu^2.
struct EigenRecord {
    int n = 0;
    int j = 0;
    cplx mu, lambda;
    int multiplicity = 1;
    double det_residual = 0.0;  // |Delta(mu)| at the accepted root
    std::size_t newton_iters = 0;
    bool ambiguous = false;  // branch labels decided by real part, not proximity
};

struct WindowResult {
    int n = 0;
    Rect box;
    int winding = 0;  // zero count inside the (possibly inflated) contour
    PredictedPair predicted;
    std::vector<EigenRecord> eigs;  // ascending real part
};

/// Eigenfunction samples on a uniform grid, L2-normalized with the phase
/// rotated so the overlap with sqrt(2) cos(center x) is real nonnegative.
struct Eigenfunction {
    std::vector<double> x;
    std::vector<cplx> values;
    std::vector<cplx> deriv;
    double norm_error = 0.0;  // | ||phi|| - 1 | after normalization
    double fd_residual = 0.0;  // max |(-phi'' + q phi - lambda phi)| (3-point stencil)
    double bc_residual = 0.0;  // |U1(phi)| + |U2(phi)|
};

/// Locates eigenvalues of -y'' + q y with a canonical BC family by winding
/// counts and Newton polish of the characteristic determinant, seeded by the
/// regime's asymptotic predictions. Contour sampling runs at a relaxed ODE
/// tolerance; accepted roots are polished at the tight one.
class EigenSolver {
public:
    EigenSolver(CanonicalBC bc, Potential q, std::optional<Regime> regime = {},
                Tolerances tol = {}, std::size_t n_out_min = 257);

    /// Search rectangle: center +- pi/2 both ways.
    Rect window(int n) const;

    /// Loose-tolerance winding count over window(n), inflating on boundary hits.
    int count_window(int n) const;

    WindowResult solve_window(int n) const;
    std::vector<WindowResult> solve_range(int n_min, int n_max) const;

    /// Census of the low-index region [1e-3, 4 pi] x [-2 pi, 2 pi].
    std::vector<EigenRecord> sweep_low() const;

    /// Normalized eigenfunction at an accepted root. n_out = 0 picks the
    /// grid recommended for mu (odd, >= max(n_out_min, 48 |mu|)).
    Eigenfunction eigenfunction(cplx mu, std::size_t n_out = 0) const;

    /// Characteristic determinant at the tight tolerance.
    cplx delta(cplx mu) const;

    const CanonicalBC& bc() const { return bc_; }
    const Potential& potential() const { return integ_.potential(); }
    Regime regime() const { return regime_; }
    const Tolerances& tolerances() const { return tol_; }

private:
    std::vector<EigenRecord> census(const Rect& box, const std::vector<cplx>& seeds,
                                    int n_label) const;

    CanonicalBC bc_;
    BCFunctionals f_;
    Integrator integ_;
    Regime regime_;
    Tolerances tol_;
    std::size_t n_out_min_;
};

}  // namespace slspec
