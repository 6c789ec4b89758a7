#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "slspec/types.hpp"

namespace slspec {

using CFunc = std::function<cplx(cplx)>;

/// Winding number of f along the rectangle boundary, counter-clockwise.
/// Phase jumps >= pi/2 between neighbouring samples are bisected until they
/// resolve. Throws BoundaryZero when the contour runs too close to a zero
/// and NonConvergence when refinement stalls for another reason.
int winding_number(const CFunc& f, const Rect& box, std::size_t min_samples = 512);

/// Winding number along a circle; used for multiplicity counts.
int winding_circle(const CFunc& f, cplx center, double radius,
                   std::size_t min_samples = 64);

/// Zero multiplicity as the winding count on a small circle around root.
int multiplicity_of(const CFunc& f, cplx root, double radius,
                    std::size_t min_samples = 64);

struct Root {
    cplx mu;
    int multiplicity = 1;
    double residual = 0.0;  // |f| at the polished point
    std::size_t newton_iters = 0;
};

struct FindOptions {
    std::size_t boundary_samples = 512;
    double newton_tol = 1e-12;  // step stop, relative to 1 + |z|
    double fd_step = 1e-6;      // derivative step, relative to 1 + |z|
    double mult_radius = 1e-4;  // multiplicity circle; also the merge distance
    int max_newton = 60;
    int max_depth = 9;          // quadtree depth cap
    double inflate = 1.03;      // growth factor after a boundary hit
    int max_inflate = 5;
};

/// Newton iteration on f deflated by the roots in `deflate` (derivative by
/// central differences). Returns the converged point, or nothing when the
/// iteration leaves `limit` (inflated by 50%) or stalls.
std::optional<cplx> newton_refine(const CFunc& f, cplx z0, const Rect& limit,
                                  const std::vector<cplx>& deflate,
                                  const FindOptions& opt = {},
                                  std::size_t* iters = nullptr);

/// All zeros of f in `box`, multiplicities included. The winding count over
/// the (possibly slightly inflated) box fixes the target; seeds are polished
/// first, remaining zeros are located by quadtree subdivision with deflation.
/// f_count is the function used for contour sampling; it may be a cheaper
/// evaluation of the same analytic function. Roots are reported with
/// ascending real part. Throws NonConvergence when the census cannot be
/// completed and BoundaryZero when inflation cannot shake the contour free.
std::vector<Root> find_zeros(const CFunc& f, const CFunc& f_count, Rect box,
                             std::vector<cplx> seeds = {}, FindOptions opt = {});

}  // namespace slspec
