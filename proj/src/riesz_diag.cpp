#include "slspec/riesz_diag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slspec/asymptotics.hpp"
#include "slspec/errors.hpp"
#include "slspec/quadrature.hpp"

namespace slspec {
namespace {

double check_unit_norm(const Eigenfunction& f) {
    std::vector<double> sq(f.values.size());
    for (std::size_t k = 0; k < f.values.size(); ++k) sq[k] = std::norm(f.values[k]);
    const double h = f.x.size() > 1 ? f.x[1] - f.x[0] : 0.0;
    const double nrm = std::sqrt(quadrature::simpson(std::span<const double>(sq), h));
    if (std::abs(nrm - 1.0) > 1e-6)
        throw NormViolation("pair angle needs unit-norm inputs; got " +
                            std::to_string(nrm));
    return nrm;
}

}  // namespace

const char* to_string(RieszVerdict v) {
    return v == RieszVerdict::FailsRieszBasis ? "FailsRieszBasis" : "Inconclusive";
}

const char* to_string(RieszRoute r) {
    switch (r) {
        case RieszRoute::None: return "none";
        case RieszRoute::RoughSplit: return "rough-split";
        case RieszRoute::SmoothSplit: return "smooth-split";
    }
    return "?";
}

PairAngleRecord pair_angle(const Eigenfunction& a, const Eigenfunction& b, int n) {
    if (a.x.size() != b.x.size() || a.x.size() < 3)
        throw KindMismatch("pair angle needs matching sample grids");
    if (std::abs(a.x.front() - b.x.front()) > 1e-12 ||
        std::abs(a.x.back() - b.x.back()) > 1e-12)
        throw KindMismatch("pair angle needs matching sample grids");
    check_unit_norm(a);
    check_unit_norm(b);

    const double h = a.x[1] - a.x[0];
    std::vector<cplx> prod(a.values.size());
    for (std::size_t k = 0; k < prod.size(); ++k)
        prod[k] = a.values[k] * std::conj(b.values[k]);
    PairAngleRecord rec;
    rec.n = n;
    rec.inner = quadrature::simpson(std::span<const cplx>(prod), h);
    rec.angle = std::acos(std::min(1.0, std::abs(rec.inner)));
    return rec;
}

ConditionSet evaluate_conditions(const Potential& q, const CanonicalBC& cbc,
                                 int n_min, int n_max, const Tolerances& tol) {
    ConditionSet cs;
    cs.moment_decay = moment_decay_condition(q, cbc.sigma, n_min, n_max, tol.cond);
    if (q.smoothness() == Smoothness::AbsolutelyContinuous && !q.is_zero()) {
        try {
            cs.endpoint_gap = endpoint_gap_condition(q, cbc, tol);
        } catch (const UndefinedCondition&) {
            cs.endpoint_gap.reset();
        }
    }
    return cs;
}

RieszReport riesz_verdict(const CanonicalBC& cbc, const Potential& /*q*/,
                          std::span<const PairAngleRecord> angles,
                          const ConditionSet& conditions, const Tolerances& tol) {
    RieszReport rep;
    rep.angles.assign(angles.begin(), angles.end());
    rep.conditions = conditions;
    std::sort(rep.angles.begin(), rep.angles.end(),
              [](const PairAngleRecord& a, const PairAngleRecord& b) { return a.n < b.n; });

    RieszEvidence& ev = rep.evidence;
    const CanonicalBC base = underlying(cbc);
    ev.family = base.family;
    ev.sigma = base.sigma;

    // Split condition, sine-decay route first: any arithmetic subsequence
    // with stride 1..4 may carry the verdict.
    const DecayReport& dr = conditions.cond12;
    for (int stride = 1; stride <= 4 && ev.route == RieszRoute::None; ++stride) {
        for (int offset = 0; offset < stride; ++offset) {
            std::vector<int> ns;
            std::vector<double> ds;
            for (std::size_t k = offset; k < dr.n.size(); k += stride) {
                ns.push_back(dr.n[k]);
                ds.push_back(dr.d[k]);
            }
            if (ns.size() < 3) continue;
            if (decay_verdict(ds, ns, tol.cond) == CondVerdict::Holds) {
                ev.route = RieszRoute::RoughSplit;
                ev.stride = stride;
                ev.offset = offset;
                break;
            }
        }
    }
    if (ev.route == RieszRoute::None && conditions.cond1314 &&
        conditions.cond1314->holds)
        ev.route = RieszRoute::SmoothSplit;

    // Angle trend.
    std::vector<int> ns;
    std::vector<double> as;
    for (const PairAngleRecord& r : rep.angles) {
        if (r.angle > 0.0) {
            ns.push_back(r.n);
            as.push_back(r.angle);
        }
    }
    ev.angle_slope = loglog_slope(ns, as);
    if (!as.empty()) {
        ev.first_angle = as.front();
        ev.last_angle = as.back();
        ev.trend_to_zero = !std::isnan(ev.angle_slope) && ev.angle_slope <= -0.5 &&
                           ev.last_angle < 0.5 * ev.first_angle;
    }

    rep.verdict = ev.route != RieszRoute::None && ev.trend_to_zero
                      ? RieszVerdict::FailsRieszBasis
                      : RieszVerdict::Inconclusive;
    return rep;
}

RieszReport diagnose_riesz(const EigenSolver& solver, int n_min, int n_max) {
    std::vector<PairAngleRecord> angles;
    for (int n = n_min; n <= n_max; ++n) {
        const WindowResult w = solver.solve_window(n);
        const EigenRecord* e1 = nullptr;
        const EigenRecord* e2 = nullptr;
        for (const EigenRecord& e : w.eigs) {
            if (e.j == 1) e1 = &e;
            if (e.j == 2) e2 = &e;
        }
        if (!e1 || !e2) continue;  // merged or unlabeled window
        const std::size_t nodes =
            Integrator::recommended_nodes(window_center(solver.bc().sigma, n));
        const Eigenfunction f1 = solver.eigenfunction(e1->mu, nodes);
        const Eigenfunction f2 = solver.eigenfunction(e2->mu, nodes);
        angles.push_back(pair_angle(f1, f2, n));
    }
    const ConditionSet cs =
        evaluate_conditions(solver.potential(), solver.bc(), n_min, n_max,
                            solver.tolerances());
    return riesz_verdict(solver.bc(), solver.potential(), angles, cs,
                         solver.tolerances());
}

}  // namespace slspec
