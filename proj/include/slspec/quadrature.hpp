#pragma once

#include <functional>
#include <span>
#include <vector>

#include "slspec/types.hpp"

namespace slspec::quadrature {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1].
/// Computed once via Newton on the Legendre recurrence and cached.
struct GaussRule {
    std::vector<double> nodes, weights;
};
const GaussRule& gauss_legendre(int n);

/// Composite Gauss-Legendre integral of f over [a,b] with `panels` equal panels.
cplx panel_integrate(const std::function<cplx(double)>& f, double a, double b,
                     int panels, int order = 12);

/// Composite Simpson on uniformly sampled values (size must be odd >= 3).
cplx simpson(std::span<const cplx> y, double h);
double simpson(std::span<const double> y, double h);

}  // namespace slspec::quadrature
