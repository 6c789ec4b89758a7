#include "slspec/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "slspec/errors.hpp"

namespace slspec::quadrature {

namespace {

// Legendre P_n and P_n' via the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

GaussRule build_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess, then Newton.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            auto [p, dp] = legendre(n, x);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        auto [p, dp] = legendre(n, x);
        (void)p;
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

cplx panel_integrate(const std::function<cplx(double)>& f, double a, double b,
                     int panels, int order) {
    const GaussRule& rule = gauss_legendre(order);
    cplx total = 0.0;
    double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * w;
        cplx acc = 0.0;
        for (int i = 0; i < order; ++i)
            acc += rule.weights[i] * f(lo + 0.5 * w * (rule.nodes[i] + 1.0));
        total += 0.5 * w * acc;
    }
    return total;
}

template <class T>
static T simpson_impl(std::span<const T> y, double h) {
    if (y.size() < 3 || y.size() % 2 == 0)
        throw QuadratureFailure("simpson needs an odd sample count >= 3");
    T acc = y.front() + y.back();
    for (size_t i = 1; i + 1 < y.size(); ++i) acc += (i % 2 ? 4.0 : 2.0) * y[i];
    return acc * (h / 3.0);
}

cplx simpson(std::span<const cplx> y, double h) { return simpson_impl(y, h); }
double simpson(std::span<const double> y, double h) { return simpson_impl(y, h); }

}  // namespace slspec::quadrature
