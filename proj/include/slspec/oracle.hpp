#pragma once

#include <vector>

#include "slspec/bc_model.hpp"
#include "slspec/potential.hpp"
#include "slspec/rootfind.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// Finite-difference pencil (A, B) on the uniform grid x_k = k/N:
/// interior rows discretize -y'' + q y - lambda y with the 3-point stencil,
/// the two boundary rows carry the BC functionals with one-sided second
/// order derivative stencils, and B selects the interior rows. Rows are
/// stored implicitly (stencil plus functionals), not as a dense matrix.
struct PencilProblem {
    int N = 0;
    double h = 0.0;
    std::vector<double> q;  // q(x_k), k = 0..N
    BCFunctionals bf;
    bool dirichlet = false;  // self-test rows y(0) = y(N) = 0
};

PencilProblem make_pencil(const BCFunctionals& bf, const Potential& q, int N);
PencilProblem make_pencil(const CanonicalBC& cbc, const Potential& q, int N);
PencilProblem make_dirichlet_pencil(const Potential& q, int N);

/// det(A - lambda B) in log-magnitude / unit-phase form, evaluated by the
/// elimination that partial-pivoting LU performs on this structure: two
/// basis recurrences plus the 2x2 boundary determinant, with the constant
/// interior pivot factor (-1/h^2)^(N-1) folded into the result.
struct LogDet {
    double log_abs = 0.0;
    cplx phase;  // unit modulus
};
/// Throws SingularFactorization when lambda hits an eigenvalue exactly.
LogDet pencil_det(const PencilProblem& prob, cplx lambda);

/// Analytic rescaling exp(log_abs - ref) * phase with ref frozen at
/// ref_lambda, safe to hand to the winding / Newton machinery. An exact
/// eigenvalue hit evaluates to 0.
CFunc pencil_func(const PencilProblem& prob, cplx ref_lambda);

/// lambda-plane rectangle bounding the image of the mu search window.
Rect lambda_region(int sigma, int n);

struct OracleEig {
    cplx lambda;
    double error_bar = 0.0;
    int multiplicity = 1;
};

/// Discretization error bar C h^2 (1 + |lambda|^2).
double oracle_error_bar(double err_constant, double h, cplx lambda);

/// Pencil eigenvalues inside region via the shared argument-principle
/// machinery; seeds are polished first. count_hint, when >= 0 and different
/// from the census, is reported through NonConvergence by the caller's
/// choice; here it only sizes internal buffers.
std::vector<OracleEig> oracle_eigs(const PencilProblem& prob, const Rect& region,
                                   double err_constant, int count_hint = -1,
                                   std::vector<cplx> seeds = {});

/// Error constant from the zero-potential twin of cbc: locate the pencil
/// roots in windows n = 2, 4, 6, compare with the closed-form determinant
/// roots, take the worst |diff| / (h^2 (1 + |lambda|^2)) times a safety 3.
double calibrate_error_constant(const CanonicalBC& cbc, int N);

}  // namespace slspec
