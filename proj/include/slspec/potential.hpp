#pragma once

#include <optional>
#include <span>
#include <vector>

#include "slspec/bc_model.hpp"
#include "slspec/types.hpp"

namespace slspec {

enum class Smoothness { L1, AbsolutelyContinuous };

enum class PotentialKind { Zero, Cosine, Sine, Sawtooth, SmoothedStep, Polynomial, Samples };

/// Real potential on [0,1], mean-normalized where the catalog guarantees it.
/// Immutable after construction; safe to share across workers.
class Potential {
public:
    static Potential zero();
    static Potential cosine(int k);                       // cos(2 pi k x)
    static Potential sine(int k);                         // sin(2 pi k x)
    static Potential sawtooth();                          // x - 1/2
    static Potential smoothed_step(double width = 0.05);  // tanh((x-1/2)/width)
    /// c0 + c1 x + ... with the mean removed automatically.
    static Potential polynomial(std::vector<double> coeffs);
    /// Uniform samples on [0,1] with linear interpolation between nodes.
    static Potential from_samples(std::vector<double> values,
                                  Smoothness s = Smoothness::L1);

    double operator()(double x) const;

    PotentialKind kind() const { return kind_; }
    Smoothness smoothness() const { return smoothness_; }
    bool is_zero() const { return kind_ == PotentialKind::Zero; }

    /// Endpoint values; for sampled potentials the first/last sample.
    double q0() const { return q0_; }
    double q1() const { return q1_; }

    /// Constant subtracted so far to reach zero mean.
    double mean_shift() const { return shift_; }

    /// Cached uniform samples (grid of sample_count() nodes incl. endpoints);
    /// agree with operator() at the nodes.
    const std::vector<double>& samples() const { return samples_; }
    int sample_count() const { return static_cast<int>(samples_.size()); }

    /// Node spacing of the defining grid for Samples-kind potentials;
    /// integrators align steps to it to preserve accuracy across kinks.
    std::optional<double> breakpoint_spacing() const;

private:
    Potential() = default;
    void finalize(int grid);

    PotentialKind kind_ = PotentialKind::Zero;
    int k_ = 0;
    double width_ = 0.05;
    std::vector<double> coeffs_;
    std::vector<double> values_;
    Smoothness smoothness_ = Smoothness::AbsolutelyContinuous;
    double q0_ = 0.0, q1_ = 0.0, shift_ = 0.0;
    std::vector<double> samples_;

    friend Potential normalize_mean(const Potential&);
};

/// Shift by the exact mean (analytic for the catalog, trapezoid for samples,
/// which is exact for piecewise-linear data). Idempotent.
Potential normalize_mean(const Potential& q);

/// Oscillatory moments c_mu = int_0^1 cos(2 mu t) q(t) dt and the sine
/// analogue, via composite Gauss-Legendre with panel count scaled by |mu|.
struct TrigMoment {
    cplx mu;
    cplx c, s;
};
TrigMoment trig_moments(const Potential& q, cplx mu, double tau_quad = 1e-12);

enum class CondVerdict { Holds, Fails, Inconclusive };
const char* to_string(CondVerdict v);

/// Decay diagnostics for the sine-coefficient condition: d_n = n |int sin(2 pi n t) q dt|
/// for sigma = 1, and d_n = n |int sin((2n+1) pi t) q dt| for sigma = 0.
struct DecayReport {
    int sigma = 1;
    std::vector<int> n;
    std::vector<double> d;
    double tail_median = 0.0;
    double slope = 0.0;  // least-squares log d_n vs log n over nonzero entries
    CondVerdict verdict = CondVerdict::Inconclusive;
};
DecayReport moment_decay_condition(const Potential& q, int sigma, int n_min,
                                   int n_max, double tau_cond = 0.02);

/// Re-evaluate the decay verdict on a subsequence of an existing report
/// (indices into report.n); used for arithmetic-subsequence evidence.
CondVerdict decay_verdict(std::span<const double> d, std::span<const int> n,
                          double tau_cond = 0.02, double* median_out = nullptr,
                          double* slope_out = nullptr);

/// Endpoint gap condition: q(0) - q(1) != 2 r^2 / (1 - p^2) for T1 and
/// != 2 r^2 / (p^2 - 1) for T2, for either window parity. Equality is
/// exactly a vanishing splitting discriminant. Throws UndefinedCondition
/// when p^2 = 1 leaves the right side undefined.
struct EndpointCondition {
    bool holds = false;
    cplx lhs, rhs;
};
EndpointCondition endpoint_gap_condition(const Potential& q, const CanonicalBC& cbc,
                                         const Tolerances& tol = {});

}  // namespace slspec
