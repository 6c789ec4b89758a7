#include "slspec/bc_model.hpp"

#include <algorithm>
#include <cmath>

#include "slspec/errors.hpp"

namespace slspec {

namespace {

double amax(std::initializer_list<cplx> vs) {
    double m = 0.0;
    for (cplx v : vs) m = std::max(m, std::abs(v));
    return m;
}

// Scale against which the theta identities are compared.
double theta_scale(const GeneralBC& bc) {
    return (std::abs(bc.a1) + std::abs(bc.b1)) * (std::abs(bc.c0) + std::abs(bc.d0));
}

void check_not_degenerate(const GeneralBC& bc, const Tolerances& tol) {
    double scale = amax({bc.a1, bc.b1, bc.a0, bc.b0, bc.c0, bc.d0});
    if (scale == 0.0) throw DegenerateBC("all boundary coefficients vanish");
    if (amax({bc.a1, bc.b1}) <= tol.alg * scale)
        throw DegenerateBC("derivative row carries no y' terms");
    if (amax({bc.c0, bc.d0}) <= tol.alg * scale)
        throw DegenerateBC("value row is identically zero");
}

}  // namespace

const char* to_string(BCCase c) {
    switch (c) {
        case BCCase::CaseA: return "CaseA";
        case BCCase::CaseB: return "CaseB";
        case BCCase::CaseC: return "CaseC";
        case BCCase::General: return "General";
        case BCCase::StronglyRegular: return "StronglyRegular";
        case BCCase::NotRegular: return "NotRegular";
    }
    return "?";
}

const char* to_string(Family f) { return f == Family::T1 ? "T1" : "T2"; }

ThetaTriple compute_theta(const GeneralBC& bc) {
    cplx t1 = bc.b1 * bc.c0 + bc.a1 * bc.d0;
    cplx t0 = 2.0 * (bc.a1 * bc.c0 + bc.b1 * bc.d0);
    return {t1, t0, t1};
}

bool is_regular_not_strongly(const GeneralBC& bc, const Tolerances& tol) {
    check_not_degenerate(bc, tol);
    ThetaTriple th = compute_theta(bc);
    double s = theta_scale(bc);
    bool regular = std::abs(th.theta_1) > tol.alg * s;
    bool degenerate_discriminant = std::abs(th.criterion()) <= tol.alg * s * s;
    return regular && degenerate_discriminant;
}

CanonicalBC reduce_to_canonical(const GeneralBC& bc, const Tolerances& tol) {
    check_not_degenerate(bc, tol);

    double row2 = std::max(std::abs(bc.c0), std::abs(bc.d0));
    double row1 = std::max(std::abs(bc.a1), std::abs(bc.b1));
    bool value_plus = std::abs(bc.d0 - bc.c0) <= tol.alg * row2;   // d0 = +c0
    bool value_minus = std::abs(bc.d0 + bc.c0) <= tol.alg * row2;  // d0 = -c0
    bool deriv_plus = std::abs(bc.a1 - bc.b1) <= tol.alg * row1;   // a1 = +b1
    bool deriv_minus = std::abs(bc.a1 + bc.b1) <= tol.alg * row1;  // a1 = -b1

    if (value_plus || value_minus) {
        // Value row is y(0) + (-1)^sigma y(1) = 0; substitute it into the
        // derivative row. Preferred over the adjoint route when both hold.
        int sigma = value_plus ? 0 : 1;
        cplx rhs = bc.b0 - parity_sign(sigma) * bc.a0;
        CanonicalBC cbc;
        cbc.sigma = sigma;
        if (std::abs(bc.a1) > tol.alg * row1) {
            // Normalize by a1 whenever it carries weight; T2 is reserved for
            // conditions with no y'(0) term.
            cbc.family = Family::T1;
            cbc.p = bc.b1 / bc.a1;
            cbc.r = rhs / bc.a1;
        } else {
            cbc.family = Family::T2;
            cbc.p = bc.a1 / bc.b1;
            cbc.r = rhs / bc.b1;
        }
        if (std::abs(cbc.p + parity_sign(sigma)) <= tol.alg * (1.0 + std::abs(cbc.p)))
            throw ViolatesRegularity("reduced mixing parameter hits -(-1)^sigma");
        return cbc;
    }

    if (deriv_plus || deriv_minus) {
        // Only the derivative row is proportional: the problem lands in the
        // adjoint-parameterized forms. Eliminate whichever endpoint value has
        // the smaller value-row coefficient.
        int sigma = deriv_plus ? 0 : 1;
        CanonicalBC cbc;
        cbc.sigma = sigma;
        cbc.adjoint_form = true;
        if (std::abs(bc.d0) > tol.alg * row2) {
            // y'(0) + (-1)^sigma y'(1) + alpha3 y(0) = 0, alpha4 y(0) + y(1) = 0
            cplx alpha3 = bc.a0 / bc.a1 - bc.b0 * bc.c0 / (bc.a1 * bc.d0);
            cplx alpha4 = bc.c0 / bc.d0;
            cbc.family = Family::T1;
            cbc.p = alpha4;
            cbc.r = alpha3;
        } else {
            // y'(0) + (-1)^sigma y'(1) + alpha1 y(1) = 0, y(0) + alpha2 y(1) = 0
            cplx alpha1 = bc.b0 / bc.a1 - bc.a0 * bc.d0 / (bc.a1 * bc.c0);
            cplx alpha2 = bc.d0 / bc.c0;
            cbc.family = Family::T2;
            cbc.p = alpha2;
            cbc.r = alpha1;
        }
        if (std::abs(cbc.p + parity_sign(sigma)) <= tol.alg * (1.0 + std::abs(cbc.p)))
            throw ViolatesRegularity("adjoint-form mixing parameter hits -(-1)^sigma");
        return cbc;
    }

    throw NotReducible("neither boundary row satisfies a +-proportionality");
}

BCCase classify_case(const CanonicalBC& cbc, const Tolerances& tol) {
    // Works for adjoint_form records too: conj(p) = (-1)^sigma iff p does.
    bool r_zero = std::abs(cbc.r) <= tol.alg * std::max(1.0, std::abs(cbc.p));
    bool p_parity = std::abs(cbc.p - parity_sign(cbc.sigma)) <= tol.alg * (1.0 + std::abs(cbc.p));
    if (r_zero && p_parity) return BCCase::CaseA;
    if (!r_zero && p_parity) return BCCase::CaseB;
    if (r_zero) return BCCase::CaseC;
    return BCCase::General;
}

BCCase classify_general(const GeneralBC& bc, const Tolerances& tol) {
    check_not_degenerate(bc, tol);
    ThetaTriple th = compute_theta(bc);
    double s = theta_scale(bc);
    if (std::abs(th.theta_1) <= tol.alg * s) return BCCase::NotRegular;
    if (std::abs(th.criterion()) > tol.alg * s * s) return BCCase::StronglyRegular;
    return classify_case(reduce_to_canonical(bc, tol), tol);
}

CanonicalBC adjoint_of(const CanonicalBC& cbc) {
    CanonicalBC adj = cbc;
    double sign = cbc.family == Family::T1 ? -parity_sign(cbc.sigma) : parity_sign(cbc.sigma);
    adj.p = std::conj(cbc.p);
    adj.r = sign * std::conj(cbc.r);
    adj.adjoint_form = !cbc.adjoint_form;
    return adj;
}

CanonicalBC underlying(const CanonicalBC& cbc) {
    return cbc.adjoint_form ? adjoint_of(cbc) : cbc;
}

BCFunctionals BCFunctionals::from(const GeneralBC& bc) {
    return {bc.a1, bc.b1, bc.a0, bc.b0, bc.c0, bc.d0};
}

BCFunctionals BCFunctionals::from(const CanonicalBC& cbc) {
    double par = parity_sign(cbc.sigma);
    if (!cbc.adjoint_form) {
        if (cbc.family == Family::T1)
            return {1.0, cbc.p, 0.0, cbc.r, 1.0, par};
        return {cbc.p, 1.0, 0.0, cbc.r, 1.0, par};
    }
    if (cbc.family == Family::T1)  // p = alpha4, r = alpha3
        return {1.0, par, cbc.r, 0.0, cbc.p, 1.0};
    // T2: p = alpha2, r = alpha1
    return {1.0, par, 0.0, cbc.r, 1.0, cbc.p};
}

}  // namespace slspec
