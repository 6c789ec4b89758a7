#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace slspec {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr cplx iu{0.0, 1.0};

/// Axis-aligned closed rectangle in the complex plane.
struct Rect {
    double re_lo = 0.0;
    double re_hi = 0.0;
    double im_lo = 0.0;
    double im_hi = 0.0;

    cplx center() const { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
    double width() const { return re_hi - re_lo; }
    double height() const { return im_hi - im_lo; }
    double diameter() const { return std::hypot(width(), height()); }

    bool contains(cplx z, double slack = 0.0) const {
        return z.real() >= re_lo - slack && z.real() <= re_hi + slack &&
               z.imag() >= im_lo - slack && z.imag() <= im_hi + slack;
    }

    /// Rectangle scaled about its center by `factor`.
    Rect inflated(double factor) const {
        const cplx c = center();
        const double hw = 0.5 * factor * width();
        const double hh = 0.5 * factor * height();
        return {c.real() - hw, c.real() + hw, c.imag() - hh, c.imag() + hh};
    }
};

/// Numerical tolerances shared across the library. Values are pinned; tests
/// rely on the defaults, CLI configs may override the first three.
struct Tolerances {
    double alg = 1e-10;        // relative tolerance for coefficient comparisons
    double ode = 1e-11;        // local ODE error per unit interval
    double quad = 1e-12;       // quadrature target on [0,1]
    double eig_scale = 1e-8;   // determinant residual accepted at eig_scale*(1+|mu|^2)
    double mult = 1e-4;        // roots closer than this count as one numerical root
    double cond = 0.02;        // decay-verdict threshold on the tail median
};

}  // namespace slspec
