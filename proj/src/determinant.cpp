#include "slspec/determinant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "slspec/errors.hpp"

namespace slspec {
namespace {

using State = std::array<cplx, 4>;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between the 5th order weights and the embedded 4th order ones.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct PlainRhs {
    const Potential& q;
    cplx lambda;  // mu^2

    State operator()(double x, const State& s) const {
        const cplx f = q(x) - lambda;
        return {s[1], f * s[0], s[3], f * s[2]};
    }
};

// Phase-factored variables (a1, b1, a2, b2) with y = a e^{i mu x} + b e^{-i mu x}.
struct EnvelopeRhs {
    const Potential& q;
    double re2, im2;  // 2 Re mu, 2 Im mu
    cplx w;           // 1 / (2 i mu)

    State operator()(double x, const State& s) const {
        const double qx = q(x);
        if (qx == 0.0) return {cplx{}, cplx{}, cplx{}, cplx{}};
        const double ex = std::exp(-im2 * x);
        const double ph = re2 * x;
        const double cp = std::cos(ph), sp = std::sin(ph);
        const cplx fwd{ex * cp, ex * sp};        // e^{2 i mu x}
        const cplx bwd{cp / ex, -sp / ex};       // e^{-2 i mu x}
        const cplx g = qx * w;
        return {g * (s[0] + s[1] * bwd), -g * (s[0] * fwd + s[1]),
                g * (s[2] + s[3] * bwd), -g * (s[2] * fwd + s[3])};
    }
};

// Advance y from 0 to 1 with per-unit-step error control: a step of size h is
// accepted when the embedded estimate stays below tol * h. rec(i, x, y) fires
// whenever an entry of outs is reached (i is the index into outs); kink
// entries only force step boundaries.
template <class Rhs, class Rec>
std::size_t run_ivp(const Rhs& rhs, State& y, double tol, double h_max,
                    const std::vector<double>& kinks, const std::vector<double>& outs,
                    Rec&& rec) {
    double x = 0.0;
    std::size_t ik = 0, io = 0, steps = 0, rejects = 0;
    State k1 = rhs(x, y);
    double h = std::min(h_max, 1e-2);

    State k2, k3, k4, k5, k6, k7, tmp, y5;
    while (x < 1.0 - 1e-14) {
        double stop = 1.0;
        if (ik < kinks.size()) stop = std::min(stop, kinks[ik]);
        if (io < outs.size()) stop = std::min(stop, outs[io]);
        const double ht = std::min(h, stop - x);

        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + ht * (a21 * k1[i]);
        k2 = rhs(x + c2 * ht, tmp);
        for (int i = 0; i < 4; ++i) tmp[i] = y[i] + ht * (a31 * k1[i] + a32 * k2[i]);
        k3 = rhs(x + c3 * ht, tmp);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + ht * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = rhs(x + c4 * ht, tmp);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + ht * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = rhs(x + c5 * ht, tmp);
        for (int i = 0; i < 4; ++i)
            tmp[i] = y[i] + ht * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        k6 = rhs(x + ht, tmp);
        for (int i = 0; i < 4; ++i)
            y5[i] = y[i] + ht * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                 b6 * k6[i]);
        k7 = rhs(x + ht, y5);

        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            const cplx e = ht * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                 e6 * k6[i] + e7 * k7[i]);
            const double scale = 1.0 + std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(e) / scale);
        }

        if (err <= tol * ht) {
            x += ht;
            if (std::abs(x - stop) < 1e-13) x = stop;
            y = y5;
            k1 = k7;
            ++steps;
            rejects = 0;
            while (ik < kinks.size() && kinks[ik] <= x + 1e-13) ++ik;
            while (io < outs.size() && outs[io] <= x + 1e-13) {
                rec(io, outs[io], y);
                ++io;
            }
            const double fac =
                err > 0.0 ? std::clamp(0.9 * std::pow(tol * ht / err, 0.25), 0.2, 5.0)
                          : 5.0;
            h = std::clamp(ht * fac, 1e-13, h_max);
        } else {
            h = ht * std::max(0.2, 0.9 * std::pow(tol * ht / err, 0.25));
            if (++rejects > 80 || h < 1e-13)
                throw StiffnessFailure("step control stalled at x = " + std::to_string(x));
        }
        if (steps > 4000000)
            throw StiffnessFailure("step budget exhausted before reaching x = 1");
    }
    return steps;
}

std::vector<double> kink_nodes(const Potential& q) {
    std::vector<double> nodes;
    if (auto dx = q.breakpoint_spacing()) {
        const int m = static_cast<int>(std::lround(1.0 / *dx));
        nodes.reserve(static_cast<std::size_t>(std::max(0, m - 1)));
        for (int j = 1; j < m; ++j) nodes.push_back(j * *dx);
    }
    return nodes;
}

struct Phases {
    cplx fwd, bwd;  // e^{i mu x}, e^{-i mu x}
};

Phases phases_at(cplx mu, double x) {
    const double ex = std::exp(-mu.imag() * x);
    const double ph = mu.real() * x;
    const double cp = std::cos(ph), sp = std::sin(ph);
    return {{ex * cp, ex * sp}, {cp / ex, -sp / ex}};
}

}  // namespace

Integrator::Integrator(Potential q, Tolerances tol) : q_(std::move(q)), tol_(tol) {}

EndpointData Integrator::endpoints(cplx mu, double tol_override) const {
    const double tol = tol_override > 0.0 ? tol_override : tol_.ode;
    const std::vector<double> kinks = kink_nodes(q_);
    const std::vector<double> no_outs;
    auto ignore = [](std::size_t, double, const State&) {};

    EndpointData out{};
    if (std::abs(mu) >= kEnvelopeSwitch) {
        State s{cplx{1.0}, cplx{}, cplx{}, cplx{1.0}};
        const EnvelopeRhs rhs{q_, 2.0 * mu.real(), 2.0 * mu.imag(), 1.0 / (2.0 * iu * mu)};
        out.steps = run_ivp(rhs, s, tol, 0.25, kinks, no_outs, ignore);
        const auto [fwd, bwd] = phases_at(mu, 1.0);
        out.y1 = s[0] * fwd + s[1] * bwd;
        out.y1p = iu * mu * (s[0] * fwd - s[1] * bwd);
        out.y2 = s[2] * fwd + s[3] * bwd;
        out.y2p = iu * mu * (s[2] * fwd - s[3] * bwd);
        out.wronskian_drift = std::abs(s[0] * s[3] - s[1] * s[2] - 1.0);
    } else {
        State s{cplx{1.0}, iu * mu, cplx{1.0}, -iu * mu};
        const PlainRhs rhs{q_, mu * mu};
        out.steps = run_ivp(rhs, s, tol, 0.1, kinks, no_outs, ignore);
        out.y1 = s[0];
        out.y1p = s[1];
        out.y2 = s[2];
        out.y2p = s[3];
        const cplx w0 = -2.0 * iu * mu;
        const cplx w1 = s[0] * s[3] - s[1] * s[2];
        const double ref = std::abs(w0);
        out.wronskian_drift = ref > 1e-12 ? std::abs(w1 - w0) / ref : std::abs(w1 - w0);
    }
    return out;
}

FundamentalPair Integrator::dense_pair(cplx mu, std::size_t n_out) const {
    if (n_out < 3) n_out = 3;
    if (n_out % 2 == 0) ++n_out;

    FundamentalPair fp;
    fp.x.resize(n_out);
    fp.y1.resize(n_out);
    fp.y1p.resize(n_out);
    fp.y2.resize(n_out);
    fp.y2p.resize(n_out);
    const double dx = 1.0 / static_cast<double>(n_out - 1);
    for (std::size_t k = 0; k < n_out; ++k) fp.x[k] = static_cast<double>(k) * dx;

    std::vector<double> outs(fp.x.begin() + 1, fp.x.end());
    const std::vector<double> kinks = kink_nodes(q_);
    const bool env = std::abs(mu) >= kEnvelopeSwitch;

    auto put = [&](std::size_t k, double x, const State& s) {
        if (env) {
            const auto [fwd, bwd] = phases_at(mu, x);
            fp.y1[k] = s[0] * fwd + s[1] * bwd;
            fp.y1p[k] = iu * mu * (s[0] * fwd - s[1] * bwd);
            fp.y2[k] = s[2] * fwd + s[3] * bwd;
            fp.y2p[k] = iu * mu * (s[2] * fwd - s[3] * bwd);
        } else {
            fp.y1[k] = s[0];
            fp.y1p[k] = s[1];
            fp.y2[k] = s[2];
            fp.y2p[k] = s[3];
        }
    };

    State s = env ? State{cplx{1.0}, cplx{}, cplx{}, cplx{1.0}}
                  : State{cplx{1.0}, iu * mu, cplx{1.0}, -iu * mu};
    put(0, 0.0, s);
    auto rec = [&](std::size_t io, double x, const State& st) { put(io + 1, x, st); };

    if (env) {
        const EnvelopeRhs rhs{q_, 2.0 * mu.real(), 2.0 * mu.imag(), 1.0 / (2.0 * iu * mu)};
        run_ivp(rhs, s, tol_.ode, 0.25, kinks, outs, rec);
        fp.wronskian_drift = std::abs(s[0] * s[3] - s[1] * s[2] - 1.0);
    } else {
        const PlainRhs rhs{q_, mu * mu};
        run_ivp(rhs, s, tol_.ode, 0.1, kinks, outs, rec);
        const cplx w0 = -2.0 * iu * mu;
        const cplx w1 = s[0] * s[3] - s[1] * s[2];
        const double ref = std::abs(w0);
        fp.wronskian_drift = ref > 1e-12 ? std::abs(w1 - w0) / ref : std::abs(w1 - w0);
    }
    return fp;
}

std::size_t Integrator::recommended_nodes(cplx mu, std::size_t n_min) {
    std::size_t n = std::max<std::size_t>(
        n_min, static_cast<std::size_t>(std::ceil(48.0 * std::abs(mu))));
    if (n < 3) n = 3;
    if (n % 2 == 0) ++n;
    return n;
}

cplx delta_exact(const EndpointData& e, const BCFunctionals& f, cplx mu) {
    const cplx one{1.0};
    const cplx u1y1 = f.u1(one, iu * mu, e.y1, e.y1p);
    const cplx u2y1 = f.u2(one, iu * mu, e.y1, e.y1p);
    const cplx u1y2 = f.u1(one, -iu * mu, e.y2, e.y2p);
    const cplx u2y2 = f.u2(one, -iu * mu, e.y2, e.y2p);
    return u1y1 * u2y2 - u1y2 * u2y1;
}

cplx delta_closed(const CanonicalBC& cbc, cplx mu, ClosedKind kind, const Potential* q) {
    // Conjugating the twin swaps the oscillatory basis pair inside the
    // 2x2 determinant; the sigma = 0 boundary rows are symmetric under that
    // swap, so matching the adjoint-form functionals costs a parity sign.
    if (cbc.adjoint_form)
        return -parity_sign(cbc.sigma) *
               std::conj(delta_closed(adjoint_of(cbc), std::conj(mu), kind, q));

    cplx cmu{};
    if (kind == ClosedKind::Leading) {
        if (!q)
            throw KindMismatch("leading closed form needs the potential for its cosine moment");
        cmu = trig_moments(*q, mu).c;
    }

    const cplx fwd = std::exp(iu * mu);
    const cplx bwd = std::exp(-iu * mu);
    const cplx p = cbc.p;
    cplx rr = cbc.r;
    if (cbc.sigma == 1) {
        rr -= 0.5 * (p + 1.0) * cmu;  // same shift for both families
        const cplx slope = cbc.family == Family::T1 ? p - 1.0 : 1.0 - p;
        return (1.0 - bwd) * (iu * mu * slope * (fwd - 1.0) + rr * (fwd + 1.0));
    }
    rr += cbc.family == Family::T1 ? 0.5 * (1.0 - p) * cmu : 0.5 * (p - 1.0) * cmu;
    const cplx slope = cbc.family == Family::T1 ? p + 1.0 : 1.0 + p;
    return (1.0 + bwd) * (iu * mu * slope * (fwd + 1.0) + rr * (fwd - 1.0));
}

cplx delta_perturbation(const CanonicalBC& cbc, cplx mu, const Potential& q) {
    if (cbc.adjoint_form)
        return -parity_sign(cbc.sigma) *
               std::conj(delta_perturbation(adjoint_of(cbc), std::conj(mu), q));

    const cplx base = delta_closed(cbc, mu, ClosedKind::Leading, &q);
    const cplx smu = trig_moments(q, mu).s;
    cplx kappa;
    if (cbc.family == Family::T1)
        kappa = cbc.sigma == 1 ? cbc.p + 1.0 : cbc.p - 1.0;
    else
        kappa = cbc.sigma == 1 ? cbc.p + 1.0 : 1.0 - cbc.p;
    return base + iu * kappa * smu * std::cos(mu);
}

}  // namespace slspec
