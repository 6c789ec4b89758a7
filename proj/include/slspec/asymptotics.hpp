#pragma once

#include <span>
#include <vector>

#include "slspec/bc_model.hpp"
#include "slspec/potential.hpp"
#include "slspec/types.hpp"

namespace slspec {

/// Which asymptotic model drives predictions and root seeding.
enum class Regime { Unperturbed, L1, AbsolutelyContinuous };
const char* to_string(Regime r);

/// Model picked from the potential: zero -> Unperturbed; smooth with the
/// endpoint pairing condition satisfied -> AbsolutelyContinuous; else L1.
Regime auto_regime(const Potential& q, const CanonicalBC& cbc,
                   const Tolerances& tol = {});

/// Window center for index n: 2 pi n when sigma = 1, (2n+1) pi when sigma = 0.
double window_center(int sigma, int n);

/// Splitting discriminant of the smooth-potential asymptotics:
///   D  = 2 (1 - p^2)(q0 - q1) - 4 r^2    T1, sigma = 1
///   D2 = 2 (1 - p^2)(q0 + q1) - 4 r^2    T1, sigma = 0
///   D3 = 2 (p^2 - 1)(q0 - q1) - 4 r^2    T2, sigma = 1
///   D4 = 2 (p^2 - 1)(q0 + q1) - 4 r^2    T2, sigma = 0
/// Vanishing D is exactly the failure of the endpoint pairing condition.
struct Discriminant {
    const char* name;  // "D", "D2", "D3", "D4"
    cplx value;
    cplx root;  // principal square root (Re >= 0, Im >= 0 on the cut)
};
Discriminant discriminant(const CanonicalBC& cbc, const Potential& q);

/// Predicted branch pair in window n. In the Unperturbed / L1 model branch 1
/// sits at the window center and branch 2 at center + split. In the smooth
/// model both branches pick up the symmetric -/+ i sqrt(D) correction;
/// branch 1 carries the minus sign.
struct PredictedPair {
    int n = 0;
    cplx mu1, mu2;
};
PredictedPair predict(const CanonicalBC& cbc, int n, Regime regime,
                      const Potential* q = nullptr, const Tolerances& tol = {});

/// Least-squares slope of log v against log n over entries with v > floor.
/// Returns NaN when fewer than three entries qualify.
double loglog_slope(std::span<const int> n, std::span<const double> v,
                    double floor = 1e-15);

/// Prediction residuals r_j(n) = |mu_j - predicted_j| and the decay slopes
/// of log(n r_j) vs log n.
struct ResidualTable {
    std::vector<int> n;
    std::vector<double> res1, res2;
    double slope1 = 0.0, slope2 = 0.0;  // NaN when undetermined
};
ResidualTable residual_table(std::span<const PredictedPair> predicted,
                             std::span<const cplx> mu1,
                             std::span<const cplx> mu2);

/// Predicted branch gaps |mu2 - mu1|; windows whose gap stays above tau
/// should resolve into two simple roots.
struct SimplicityReport {
    std::vector<int> n;
    std::vector<double> gap;
    double min_gap = 0.0;
    double tau = 1e-4;
    bool all_exceed_tau = false;
};
SimplicityReport simplicity_report(const CanonicalBC& cbc, int n_min, int n_max,
                                   Regime regime, const Potential* q = nullptr,
                                   double tau = 1e-4);

}  // namespace slspec
