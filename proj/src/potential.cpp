#include "slspec/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "slspec/errors.hpp"
#include "slspec/quadrature.hpp"

namespace slspec {

namespace {
constexpr int kDefaultGrid = 4097;
}

const char* to_string(CondVerdict v) {
    switch (v) {
        case CondVerdict::Holds: return "Holds";
        case CondVerdict::Fails: return "Fails";
        case CondVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

double Potential::operator()(double x) const {
    switch (kind_) {
        case PotentialKind::Zero:
            return 0.0;
        case PotentialKind::Cosine:
            return std::cos(2.0 * pi * k_ * x);
        case PotentialKind::Sine:
            return std::sin(2.0 * pi * k_ * x);
        case PotentialKind::Sawtooth:
            return x - 0.5;
        case PotentialKind::SmoothedStep:
            return std::tanh((x - 0.5) / width_);
        case PotentialKind::Polynomial: {
            double acc = 0.0;
            for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
            return acc - shift_;
        }
        case PotentialKind::Samples: {
            double t = std::clamp(x, 0.0, 1.0) * (values_.size() - 1);
            size_t i = std::min(static_cast<size_t>(t), values_.size() - 2);
            double f = t - i;
            return values_[i] * (1.0 - f) + values_[i + 1] * f;
        }
    }
    return 0.0;
}

void Potential::finalize(int grid) {
    samples_.resize(grid);
    for (int i = 0; i < grid; ++i) samples_[i] = (*this)(static_cast<double>(i) / (grid - 1));
    q0_ = samples_.front();
    q1_ = samples_.back();
}

Potential Potential::zero() {
    Potential q;
    q.kind_ = PotentialKind::Zero;
    q.finalize(kDefaultGrid);
    return q;
}

Potential Potential::cosine(int k) {
    Potential q;
    q.kind_ = PotentialKind::Cosine;
    q.k_ = k;
    q.finalize(kDefaultGrid);
    return q;
}

Potential Potential::sine(int k) {
    Potential q;
    q.kind_ = PotentialKind::Sine;
    q.k_ = k;
    q.finalize(kDefaultGrid);
    return q;
}

Potential Potential::sawtooth() {
    Potential q;
    q.kind_ = PotentialKind::Sawtooth;
    q.finalize(kDefaultGrid);
    return q;
}

Potential Potential::smoothed_step(double width) {
    Potential q;
    q.kind_ = PotentialKind::SmoothedStep;
    q.width_ = width;
    q.finalize(kDefaultGrid);
    return q;
}

Potential Potential::polynomial(std::vector<double> coeffs) {
    Potential q;
    q.kind_ = PotentialKind::Polynomial;
    q.coeffs_ = std::move(coeffs);
    q.finalize(kDefaultGrid);
    return normalize_mean(q);
}

Potential Potential::from_samples(std::vector<double> values, Smoothness s) {
    if (values.size() < 2) throw QuadratureFailure("sampled potential needs >= 2 values");
    Potential q;
    q.kind_ = PotentialKind::Samples;
    q.values_ = std::move(values);
    q.smoothness_ = s;
    q.finalize(static_cast<int>(q.values_.size()));
    return q;
}

std::optional<double> Potential::breakpoint_spacing() const {
    if (kind_ != PotentialKind::Samples) return std::nullopt;
    return 1.0 / (values_.size() - 1);
}

Potential normalize_mean(const Potential& q) {
    Potential out = q;
    double mean = 0.0;
    switch (q.kind_) {
        case PotentialKind::Zero:
        case PotentialKind::Cosine:
        case PotentialKind::Sine:
        case PotentialKind::Sawtooth:
        case PotentialKind::SmoothedStep:
            return out;  // zero-mean by construction
        case PotentialKind::Polynomial: {
            for (size_t j = 0; j < q.coeffs_.size(); ++j) mean += q.coeffs_[j] / (j + 1);
            mean -= q.shift_;
            out.shift_ = q.shift_ + mean;
            break;
        }
        case PotentialKind::Samples: {
            // Trapezoid rule is exact for the piecewise-linear interpolant.
            double acc = 0.5 * (q.values_.front() + q.values_.back());
            for (size_t i = 1; i + 1 < q.values_.size(); ++i) acc += q.values_[i];
            mean = acc / (q.values_.size() - 1);
            for (double& v : out.values_) v -= mean;
            break;
        }
    }
    out.finalize(q.sample_count());
    return out;
}

namespace {

cplx oscillatory_integral(const Potential& q, const std::function<cplx(double)>& osc,
                          cplx mu, double target) {
    auto f = [&](double t) { return osc(t) * q(t); };
    if (q.kind() == PotentialKind::Samples) {
        // Panels aligned to the sample grid keep the integrand smooth per panel.
        int panels = q.sample_count() - 1;
        return quadrature::panel_integrate(f, 0.0, 1.0, panels, 6);
    }
    int panels = std::max(4, static_cast<int>(std::ceil(std::abs(mu) / 3.0)));
    cplx prev = quadrature::panel_integrate(f, 0.0, 1.0, panels);
    for (int iter = 0; iter < 12; ++iter) {
        panels *= 2;
        cplx cur = quadrature::panel_integrate(f, 0.0, 1.0, panels);
        if (std::abs(cur - prev) <= target) return cur;
        prev = cur;
    }
    throw QuadratureFailure("oscillatory moment did not converge at max panel count");
}

}  // namespace

TrigMoment trig_moments(const Potential& q, cplx mu, double tau_quad) {
    if (std::abs(mu.imag()) > 10.0)
        throw QuadratureFailure("trig_moments limited to |Im mu| <= 10");
    double target = tau_quad * std::exp(2.0 * std::abs(mu.imag()));
    TrigMoment m;
    m.mu = mu;
    if (q.is_zero()) return m;  // (0,0)
    m.c = oscillatory_integral(q, [&](double t) { return std::cos(2.0 * mu * t); }, mu, target);
    m.s = oscillatory_integral(q, [&](double t) { return std::sin(2.0 * mu * t); }, mu, target);
    return m;
}

CondVerdict decay_verdict(std::span<const double> d, std::span<const int> n,
                          double tau_cond, double* median_out, double* slope_out) {
    if (d.empty()) return CondVerdict::Inconclusive;
    size_t q3 = d.size() - std::max<size_t>(1, d.size() / 4);
    std::vector<double> tail(d.begin() + q3, d.end());
    std::sort(tail.begin(), tail.end());
    double med = tail[tail.size() / 2];

    // Least-squares slope of log d vs log n over meaningful entries.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (size_t i = 0; i < d.size(); ++i) {
        if (d[i] <= 1e-13) continue;
        double x = std::log(static_cast<double>(n[i])), y = std::log(d[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    double slope = 0.0;
    if (cnt >= 3) {
        double det = cnt * sxx - sx * sx;
        if (det > 0) slope = (cnt * sxy - sx * sy) / det;
    }
    if (median_out) *median_out = med;
    if (slope_out) *slope_out = slope;

    if (med < tau_cond) return CondVerdict::Holds;
    // Above the threshold: a stabilized sequence fails, a decaying one is
    // still undecided on a finite range.
    if (slope > -0.2) return CondVerdict::Fails;
    return CondVerdict::Inconclusive;
}

DecayReport moment_decay_condition(const Potential& q, int sigma, int n_min,
                                   int n_max, double tau_cond) {
    Potential qn = normalize_mean(q);
    DecayReport rep;
    rep.sigma = sigma;
    for (int n = n_min; n <= n_max; ++n) {
        // sin(2 pi n t) is the s-moment at mu = pi n; sin((2n+1) pi t) at mu = (2n+1) pi / 2.
        cplx mu = sigma == 1 ? cplx(pi * n, 0.0) : cplx(0.5 * (2 * n + 1) * pi, 0.0);
        TrigMoment m = trig_moments(qn, mu);
        rep.n.push_back(n);
        rep.d.push_back(n * std::abs(m.s));
    }
    rep.verdict = decay_verdict(rep.d, rep.n, tau_cond, &rep.tail_median, &rep.slope);
    return rep;
}

EndpointCondition endpoint_gap_condition(const Potential& q, const CanonicalBC& cbc,
                                         const Tolerances& tol) {
    CanonicalBC u = underlying(cbc);
    EndpointCondition out;
    out.lhs = q.q0() - q.q1();
    cplx den = u.family == Family::T1 ? 1.0 - u.p * u.p : u.p * u.p - 1.0;
    if (std::abs(den) <= tol.alg * (1.0 + std::norm(u.p)))
        throw UndefinedCondition("pairing condition undefined at p^2 = 1");
    out.rhs = 2.0 * u.r * u.r / den;
    out.holds = std::abs(out.lhs - out.rhs) > tol.alg * (1.0 + std::abs(out.lhs) + std::abs(out.rhs));
    return out;
}

}  // namespace slspec
