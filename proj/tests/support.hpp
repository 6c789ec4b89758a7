#pragma once

#include <complex>
#include <random>
#include <string>

#include <doctest.h>

#include "slspec/types.hpp"

namespace testsupport {

using slspec::cplx;

inline bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

inline std::string show(cplx z) {
    return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

// Uniform real in [lo, hi].
inline double urand(std::mt19937& gen, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
}

// Complex with both parts uniform in [-s, s], bounded away from zero.
inline cplx crand(std::mt19937& gen, double s, double min_abs = 0.0) {
    for (;;) {
        cplx z{urand(gen, -s, s), urand(gen, -s, s)};
        if (std::abs(z) >= min_abs) return z;
    }
}

}  // namespace testsupport

// |a - b| <= tol with a readable failure message.
#define CHECK_CPLX(a, b, tol)                                                        \
    do {                                                                             \
        const slspec::cplx lhs_ = (a);                                               \
        const slspec::cplx rhs_ = (b);                                               \
        CHECK_MESSAGE(std::abs(lhs_ - rhs_) <= (tol),                                \
                      #a " = " << testsupport::show(lhs_) << " vs " << #b << " = "   \
                               << testsupport::show(rhs_) << ", |diff| = "           \
                               << std::abs(lhs_ - rhs_) << " > " << (tol));          \
    } while (0)
