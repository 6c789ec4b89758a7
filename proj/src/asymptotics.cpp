#include "slspec/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "slspec/errors.hpp"

namespace slspec {
namespace {

// Split of the second branch against the window center in the rough model.
cplx l1_split(const CanonicalBC& c, int n, const Tolerances& tol) {
    cplx den;
    if (c.sigma == 1)
        den = (c.family == Family::T1 ? c.p - 1.0 : 1.0 - c.p) * (pi * n);
    else
        den = (c.p + 1.0) * ((2.0 * n + 1.0) * pi * 0.5);  // both families
    if (std::abs(den) <= tol.alg * (1.0 + std::abs(c.p)) * (1.0 + pi * n))
        throw ViolatesRegularity("canonical parameter sits on the excluded value");
    return c.r / den;
}

}  // namespace

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Unperturbed: return "unperturbed";
        case Regime::L1: return "l1";
        case Regime::AbsolutelyContinuous: return "absolutely-continuous";
    }
    return "?";
}

Regime auto_regime(const Potential& q, const CanonicalBC& cbc, const Tolerances& tol) {
    if (q.is_zero()) return Regime::Unperturbed;
    if (q.smoothness() == Smoothness::AbsolutelyContinuous) {
        try {
            if (endpoint_gap_condition(q, cbc, tol).holds) return Regime::AbsolutelyContinuous;
        } catch (const UndefinedCondition&) {
        }
    }
    return Regime::L1;
}

double window_center(int sigma, int n) {
    return sigma == 1 ? 2.0 * pi * n : (2.0 * n + 1.0) * pi;
}

Discriminant discriminant(const CanonicalBC& cbc, const Potential& q) {
    const CanonicalBC c = underlying(cbc);
    // Both window parities see the same boundary term: cos 2mu = +1 at the
    // centers 2 pi n and (2n+1) pi alike, so the endpoint difference enters.
    const double qq = q.q0() - q.q1();
    const cplx psq = c.family == Family::T1 ? 1.0 - c.p * c.p : c.p * c.p - 1.0;
    // Flush signed zeros: sqrt's branch cut along the negative real axis
    // must not depend on how a zero imaginary part was produced.
    const cplx raw = 2.0 * psq * qq - 4.0 * c.r * c.r;
    const cplx val{raw.real() + 0.0, raw.imag() + 0.0};
    const char* name = c.family == Family::T1 ? (c.sigma == 1 ? "D" : "D2")
                                              : (c.sigma == 1 ? "D3" : "D4");
    return {name, val, std::sqrt(val)};
}

PredictedPair predict(const CanonicalBC& cbc, int n, Regime regime,
                      const Potential* q, const Tolerances& tol) {
    if (n < 1) throw ConfigError("window index must be >= 1");
    if (cbc.adjoint_form) {
        PredictedPair tw = predict(adjoint_of(cbc), n, regime, q, tol);
        return {n, std::conj(tw.mu1), std::conj(tw.mu2)};
    }
    const double center = window_center(cbc.sigma, n);
    if (regime != Regime::AbsolutelyContinuous) {
        const cplx split = l1_split(cbc, n, tol);
        return {n, center, center + split};
    }

    if (!q)
        throw KindMismatch("smooth-model prediction needs the potential's endpoint values");
    const Discriminant d = discriminant(cbc, *q);
    const double scale =
        1.0 + std::abs(d.value) + 4.0 * std::norm(cbc.r) + 2.0 * std::abs(1.0 - cbc.p * cbc.p);
    if (std::abs(d.value) <= tol.alg * scale)
        throw ConditionViolated("splitting discriminant vanishes; smooth model degenerates");

    cplx num1, num2, den;
    if (cbc.sigma == 1) {
        const cplx two_r = cbc.family == Family::T1 ? 2.0 * cbc.r : -2.0 * cbc.r;
        num1 = two_r - iu * d.root;
        num2 = two_r + iu * d.root;
        den = 4.0 * (cbc.p - 1.0) * (pi * n);
    } else {
        num1 = 2.0 * cbc.r - iu * d.root;
        num2 = 2.0 * cbc.r + iu * d.root;
        den = 2.0 * (cbc.p + 1.0) * ((2.0 * n + 1.0) * pi);
    }
    if (std::abs(den) <= tol.alg * (1.0 + std::abs(cbc.p)) * (1.0 + pi * n))
        throw ViolatesRegularity("canonical parameter sits on the excluded value");
    return {n, center + num1 / den, center + num2 / den};
}

double loglog_slope(std::span<const int> n, std::span<const double> v, double floor) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t k = 0; k < n.size() && k < v.size(); ++k) {
        if (!(v[k] > floor) || n[k] < 1) continue;
        const double x = std::log(static_cast<double>(n[k]));
        const double y = std::log(v[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 3) return std::numeric_limits<double>::quiet_NaN();
    const double det = m * sxx - sx * sx;
    if (det <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (m * sxy - sx * sy) / det;
}

ResidualTable residual_table(std::span<const PredictedPair> predicted,
                             std::span<const cplx> mu1, std::span<const cplx> mu2) {
    ResidualTable t;
    const std::size_t m = std::min({predicted.size(), mu1.size(), mu2.size()});
    std::vector<double> scaled1, scaled2;
    for (std::size_t k = 0; k < m; ++k) {
        t.n.push_back(predicted[k].n);
        t.res1.push_back(std::abs(mu1[k] - predicted[k].mu1));
        t.res2.push_back(std::abs(mu2[k] - predicted[k].mu2));
        scaled1.push_back(predicted[k].n * t.res1.back());
        scaled2.push_back(predicted[k].n * t.res2.back());
    }
    t.slope1 = loglog_slope(t.n, scaled1);
    t.slope2 = loglog_slope(t.n, scaled2);
    return t;
}

SimplicityReport simplicity_report(const CanonicalBC& cbc, int n_min, int n_max,
                                   Regime regime, const Potential* q, double tau) {
    if (n_min < 1 || n_max < n_min) throw ConfigError("bad window range");
    SimplicityReport rep;
    rep.tau = tau;
    rep.min_gap = std::numeric_limits<double>::infinity();
    for (int n = n_min; n <= n_max; ++n) {
        const PredictedPair pp = predict(cbc, n, regime, q);
        rep.n.push_back(n);
        rep.gap.push_back(std::abs(pp.mu2 - pp.mu1));
        rep.min_gap = std::min(rep.min_gap, rep.gap.back());
    }
    rep.all_exceed_tau = rep.min_gap > tau;
    return rep;
}

}  // namespace slspec
