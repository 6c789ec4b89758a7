#pragma once

#include <optional>
#include <span>
#include <vector>

#include "slspec/bc_model.hpp"
#include "slspec/eig_solver.hpp"
#include "slspec/potential.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// Angle between the two branch eigenfunctions of one window.
struct PairAngleRecord {
    int n = 0;
    double angle = 0.0;  // arccos(min(1, |inner|)), in [0, pi/2]
    cplx inner;          // L2 inner product of the unit-norm pair
};

/// L2 angle of two normalized sampled functions on the same grid.
/// Throws KindMismatch when the grids differ and NormViolation when either
/// input's norm strays from 1 by more than 1e-6.
PairAngleRecord pair_angle(const Eigenfunction& a, const Eigenfunction& b, int n = 0);

enum class RieszVerdict { FailsRieszBasis, Inconclusive };
const char* to_string(RieszVerdict v);

/// Which splitting mechanism triggered the verdict. RoughSplit is the
/// sine-coefficient decay route (any arithmetic subsequence), SmoothSplit the
/// endpoint gap route for smooth potentials.
enum class RieszRoute { None, RoughSplit, SmoothSplit };
const char* to_string(RieszRoute r);

struct ConditionSet {
    DecayReport moment_decay;
    std::optional<EndpointCondition> endpoint_gap;  // absent when undefined or not smooth
};
ConditionSet evaluate_conditions(const Potential& q, const CanonicalBC& cbc,
                                 int n_min, int n_max, const Tolerances& tol = {});

struct RieszEvidence {
    RieszRoute route = RieszRoute::None;
    Family family = Family::T1;
    int sigma = 1;
    int stride = 0, offset = 0;  // subsequence that held (RoughSplit only)
    double angle_slope = 0.0;    // log angle vs log n, NaN if undetermined
    bool trend_to_zero = false;
    double first_angle = 0.0, last_angle = 0.0;
};

struct RieszReport {
    RieszVerdict verdict = RieszVerdict::Inconclusive;
    std::vector<PairAngleRecord> angles;
    ConditionSet conditions;
    RieszEvidence evidence;
};

/// Verdict: FailsRieszBasis when a split condition holds (sine-decay on some
/// arithmetic subsequence with stride 1..4, or the smooth endpoint gap)
/// AND the pair angles trend to zero (slope <= -0.5 and the last angle below
/// half the first). Inconclusive otherwise.
RieszReport riesz_verdict(const CanonicalBC& cbc, const Potential& q,
                          std::span<const PairAngleRecord> angles,
                          const ConditionSet& conditions,
                          const Tolerances& tol = {});

/// End-to-end: solve windows n_min..n_max, build branch pair angles (windows
/// that do not resolve two simple roots contribute no angle), evaluate the
/// conditions, and return the verdict.
RieszReport diagnose_riesz(const EigenSolver& solver, int n_min, int n_max);

}  // namespace slspec
