#pragma once

#include <utility>

#include "slspec/types.hpp"

namespace slspec {

/// Two-point boundary conditions for -y'' + q(x) y = mu^2 y on [0,1]:
///
///   U1(y) = a1 y'(0) + b1 y'(1) + a0 y(0) + b0 y(1) = 0
///   U2(y) =                       c0 y(0) + d0 y(1) = 0
///
/// Not identically degenerate: (a1,b1) != (0,0) and (c0,d0) != (0,0).
struct GeneralBC {
    cplx a1, b1, a0, b0, c0, d0;
};

/// Invariants of the leading boundary coefficients with weight w1 = 1:
/// theta_1 = theta_m1 = b1 c0 + a1 d0, theta_0 = 2 (a1 c0 + b1 d0).
/// Regular but not strongly regular means theta_1 != 0 and
/// theta_0^2 - 4 theta_1 theta_m1 = 0, equivalently
/// (a1^2 - b1^2)(c0^2 - d0^2) = 0.
struct ThetaTriple {
    cplx theta_m1, theta_0, theta_1;

    cplx criterion() const { return theta_0 * theta_0 - 4.0 * theta_1 * theta_m1; }
};

enum class Family { T1, T2 };

/// Canonical reduced boundary conditions.
///
/// With adjoint_form == false the pair (p, r) parameterizes
///   T1: U1(y) = y'(0) + p y'(1) + r y(1),   U2(y) = y(0) + (-1)^sigma y(1)
///   T2: U1(y) = p y'(0) + y'(1) + r y(1),   U2(y) = y(0) + (-1)^sigma y(1)
/// with the regularity constraint p != -(-1)^sigma.
///
/// With adjoint_form == true the record describes the adjoint-parameterized
/// forms reachable when only the derivative row is proportional:
///   T1: U1(y) = y'(0) + (-1)^sigma y'(1) + r y(0),  U2(y) = p y(0) + y(1)
///   T2: U1(y) = y'(0) + (-1)^sigma y'(1) + r y(1),  U2(y) = y(0) + p y(1)
/// Spectral routines solve the adjoint twin (see adjoint_of) and conjugate
/// eigenvalues; eigenfunctions are built from the functionals above.
struct CanonicalBC {
    Family family = Family::T1;
    int sigma = 1;  // 0 or 1; search windows sit at (2n+1)pi resp. 2 pi n
    cplx p, r;
    bool adjoint_form = false;
};

/// Case taxonomy of a canonical BC; StronglyRegular / NotRegular only appear
/// when classifying raw coefficient input.
enum class BCCase {
    CaseA,    // r = 0, p = (-1)^sigma   (periodic / antiperiodic)
    CaseB,    // r != 0, p = (-1)^sigma
    CaseC,    // r = 0, p != (-1)^sigma
    General,  // r != 0, p != (-1)^sigma
    StronglyRegular,
    NotRegular,
};

const char* to_string(BCCase c);
const char* to_string(Family f);

ThetaTriple compute_theta(const GeneralBC& bc);

/// True iff the BC is regular (b1 c0 + a1 d0 != 0) and the theta criterion
/// vanishes within tol.alg relative to the coefficient scale.
/// Throws DegenerateBC when a condition row carries no boundary content.
bool is_regular_not_strongly(const GeneralBC& bc, const Tolerances& tol = {});

/// Reduce a regular-but-not-strongly-regular BC to canonical form. Prefers
/// the direct (adjoint_form == false) reduction when the value row is
/// proportional to y(0) +- y(1); falls back to the adjoint-parameterized
/// forms when only the derivative row is proportional.
/// Throws NotReducible / ViolatesRegularity / DegenerateBC.
CanonicalBC reduce_to_canonical(const GeneralBC& bc, const Tolerances& tol = {});

/// Case tag of a canonical record (one of CaseA/CaseB/CaseC/General).
BCCase classify_case(const CanonicalBC& cbc, const Tolerances& tol = {});

/// Full taxonomy for raw input, including StronglyRegular / NotRegular.
BCCase classify_general(const GeneralBC& bc, const Tolerances& tol = {});

/// Adjoint problem of a canonical record. Parameter map
///   (p, r) -> (conj(p), -(-1)^sigma conj(r))   for T1,
///   (p, r) -> (conj(p), +(-1)^sigma conj(r))   for T2,
/// with the adjoint_form flag toggled; an involution.
CanonicalBC adjoint_of(const CanonicalBC& cbc);

/// The adjoint_form == false twin whose spectrum conjugates to cbc's.
CanonicalBC underlying(const CanonicalBC& cbc);

/// Boundary functionals as linear forms in (y'(0), y'(1), y(0), y(1)).
struct BCFunctionals {
    // u1 = (d0, d1, v0, v1) acting as d0 y'(0) + d1 y'(1) + v0 y(0) + v1 y(1)
    cplx u1_d0, u1_d1, u1_v0, u1_v1;
    cplx u2_v0, u2_v1;  // value row never carries derivatives

    static BCFunctionals from(const GeneralBC& bc);
    static BCFunctionals from(const CanonicalBC& cbc);

    cplx u1(cplx y0, cplx y0p, cplx y1, cplx y1p) const {
        return u1_d0 * y0p + u1_d1 * y1p + u1_v0 * y0 + u1_v1 * y1;
    }
    cplx u2(cplx y0, cplx /*y0p*/, cplx y1, cplx /*y1p*/) const {
        return u2_v0 * y0 + u2_v1 * y1;
    }
};

inline double parity_sign(int sigma) { return sigma == 0 ? 1.0 : -1.0; }

}  // namespace slspec
