#include "slspec/eig_solver.hpp"

#include <algorithm>
#include <cmath>

#include "slspec/errors.hpp"
#include "slspec/quadrature.hpp"

namespace slspec {
namespace {

constexpr double kCountTol = 1e-6;  // relaxed ODE tolerance for contours

FindOptions find_options(const Tolerances& tol) {
    FindOptions opt;
    opt.mult_radius = tol.mult;
    return opt;
}

}  // namespace

EigenSolver::EigenSolver(CanonicalBC bc, Potential q, std::optional<Regime> regime,
                         Tolerances tol, std::size_t n_out_min)
    : bc_(bc),
      f_(BCFunctionals::from(bc)),
      integ_(std::move(q), tol),
      regime_(regime ? *regime : auto_regime(integ_.potential(), bc_, tol)),
      tol_(tol),
      n_out_min_(n_out_min) {}

cplx EigenSolver::delta(cplx mu) const {
    return delta_exact(integ_.endpoints(mu), f_, mu);
}

Rect EigenSolver::window(int n) const {
    const double c = window_center(bc_.sigma, n);
    return {c - 0.5 * pi, c + 0.5 * pi, -0.5 * pi, 0.5 * pi};
}

int EigenSolver::count_window(int n) const {
    CFunc loose = [this](cplx mu) {
        return delta_exact(integ_.endpoints(mu, kCountTol), f_, mu);
    };
    Rect box = window(n);
    const FindOptions opt = find_options(tol_);
    for (int k = 0;; ++k) {
        try {
            return winding_number(loose, box, opt.boundary_samples);
        } catch (const BoundaryZero&) {
            if (k >= opt.max_inflate) throw;
            box = box.inflated(opt.inflate);
        }
    }
}

std::vector<EigenRecord> EigenSolver::census(const Rect& box,
                                             const std::vector<cplx>& seeds,
                                             int n_label) const {
    CFunc tight = [this](cplx mu) { return delta(mu); };
    CFunc loose = [this](cplx mu) {
        return delta_exact(integ_.endpoints(mu, kCountTol), f_, mu);
    };
    const std::vector<Root> roots =
        find_zeros(tight, loose, box, seeds, find_options(tol_));
    std::vector<EigenRecord> out;
    out.reserve(roots.size());
    for (const Root& r : roots) {
        EigenRecord e;
        e.n = n_label;
        e.mu = r.mu;
        e.lambda = r.mu * r.mu;
        e.multiplicity = r.multiplicity;
        e.det_residual = r.residual;
        e.newton_iters = r.newton_iters;
        out.push_back(e);
    }
    return out;
}

WindowResult EigenSolver::solve_window(int n) const {
    WindowResult w;
    w.n = n;
    w.box = window(n);
    w.predicted = predict(bc_, n, regime_, &integ_.potential(), tol_);
    w.eigs = census(w.box, {w.predicted.mu1, w.predicted.mu2}, n);
    w.winding = 0;
    for (const EigenRecord& e : w.eigs) w.winding += e.multiplicity;

    if (w.eigs.size() == 2 && w.eigs[0].multiplicity == 1 &&
        w.eigs[1].multiplicity == 1) {
        const double straight = std::abs(w.eigs[0].mu - w.predicted.mu1) +
                                std::abs(w.eigs[1].mu - w.predicted.mu2);
        const double swapped = std::abs(w.eigs[0].mu - w.predicted.mu2) +
                               std::abs(w.eigs[1].mu - w.predicted.mu1);
        const double lo = std::min(straight, swapped), hi = std::max(straight, swapped);
        if (hi > 0.0 && lo / hi >= 0.9) {
            // Proximity does not separate the branches; fall back to the
            // real-part order and say so.
            w.eigs[0].j = 1;
            w.eigs[1].j = 2;
            w.eigs[0].ambiguous = w.eigs[1].ambiguous = true;
        } else if (straight <= swapped) {
            w.eigs[0].j = 1;
            w.eigs[1].j = 2;
        } else {
            w.eigs[0].j = 2;
            w.eigs[1].j = 1;
        }
    } else {
        for (EigenRecord& e : w.eigs) e.ambiguous = true;
    }
    return w;
}

std::vector<WindowResult> EigenSolver::solve_range(int n_min, int n_max) const {
    if (n_min < 1 || n_max < n_min) throw ConfigError("bad window range");
    std::vector<WindowResult> out;
    out.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n) out.push_back(solve_window(n));
    return out;
}

std::vector<EigenRecord> EigenSolver::sweep_low() const {
    const Rect box{1e-3, 4.0 * pi, -2.0 * pi, 2.0 * pi};
    std::vector<cplx> seeds;
    const int n_top = bc_.sigma == 1 ? 2 : 1;
    for (int n = 1; n <= n_top; ++n) {
        try {
            const PredictedPair pp = predict(bc_, n, regime_, &integ_.potential(), tol_);
            seeds.push_back(pp.mu1);
            seeds.push_back(pp.mu2);
        } catch (const Error&) {
            // Seeds are optional; the census subdivides without them.
        }
    }
    std::vector<EigenRecord> out = census(box, seeds, 0);
    // Contour inflation on boundary grazers can pull in the determinant's
    // structural odd-symmetry zero at the origin (and -mu mirrors); the box
    // deliberately starts right of 0, so clip the census back to it.
    std::erase_if(out, [&](const EigenRecord& e) {
        return !box.contains(e.mu, tol_.mult);
    });
    return out;
}

Eigenfunction EigenSolver::eigenfunction(cplx mu, std::size_t n_out) const {
    if (n_out == 0) n_out = Integrator::recommended_nodes(mu, n_out_min_);
    const FundamentalPair fp = integ_.dense_pair(mu, n_out);
    const std::size_t m = fp.x.size();

    const cplx u1y1 = f_.u1(cplx{1.0}, iu * mu, fp.y1.back(), fp.y1p.back());
    const cplx u1y2 = f_.u1(cplx{1.0}, -iu * mu, fp.y2.back(), fp.y2p.back());
    const cplx u2y1 = f_.u2(cplx{1.0}, iu * mu, fp.y1.back(), fp.y1p.back());
    const cplx u2y2 = f_.u2(cplx{1.0}, -iu * mu, fp.y2.back(), fp.y2p.back());

    // A row that annihilates both basis solutions carries no cofactor; its
    // values are pure integration noise. Measure each row against its
    // cancellation-free application size and fall back to the value row
    // before declaring the eigenspace degenerate (periodic-type centers).
    auto row1_mag = [this](cplx y0p, cplx y1v, cplx y1p) {
        return std::abs(f_.u1_d0) * std::abs(y0p) + std::abs(f_.u1_d1) * std::abs(y1p) +
               std::abs(f_.u1_v0) + std::abs(f_.u1_v1) * std::abs(y1v);
    };
    const double s1 = std::max(row1_mag(iu * mu, fp.y1.back(), fp.y1p.back()),
                               row1_mag(-iu * mu, fp.y2.back(), fp.y2p.back()));
    const double s2 =
        std::abs(f_.u2_v0) +
        std::abs(f_.u2_v1) * std::max(std::abs(fp.y1.back()), std::abs(fp.y2.back()));
    cplx c1, c2;  // phi = c2 y1 - c1 y2 from the surviving row
    if (std::abs(u1y1) + std::abs(u1y2) > 1e-8 * s1) {
        c1 = u1y1;
        c2 = u1y2;
    } else if (std::abs(u2y1) + std::abs(u2y2) > 1e-8 * s2) {
        c1 = u2y1;
        c2 = u2y2;
    } else {
        throw DegenerateEigenfunction("both boundary rows vanish on the basis pair");
    }

    Eigenfunction ef;
    ef.x = fp.x;
    ef.values.resize(m);
    ef.deriv.resize(m);
    double peak = 0.0, basis_peak = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        ef.values[k] = fp.y1[k] * c2 - fp.y2[k] * c1;
        ef.deriv[k] = fp.y1p[k] * c2 - fp.y2p[k] * c1;
        peak = std::max(peak, std::abs(ef.values[k]));
        basis_peak = std::max({basis_peak, std::abs(fp.y1[k]), std::abs(fp.y2[k])});
    }
    const double scale = basis_peak * (std::abs(c1) + std::abs(c2));
    if (!(peak > 1e-12 * scale))
        throw DegenerateEigenfunction("cofactor collapses; both basis functionals vanish");

    const double h = fp.x[1] - fp.x[0];
    std::vector<double> sq(m);
    for (std::size_t k = 0; k < m; ++k) sq[k] = std::norm(ef.values[k]);
    const double nrm = std::sqrt(quadrature::simpson(std::span<const double>(sq), h));
    if (!(nrm > 0.0)) throw DegenerateEigenfunction("zero norm");
    for (std::size_t k = 0; k < m; ++k) {
        ef.values[k] /= nrm;
        ef.deriv[k] /= nrm;
    }

    // Phase: make the overlap with sqrt(2) cos(center x) real nonnegative.
    const double re = mu.real();
    int idx;
    if (bc_.sigma == 1)
        idx = std::max(1, static_cast<int>(std::lround(re / (2.0 * pi))));
    else
        idx = std::max(0, static_cast<int>(std::lround(0.5 * (re / pi - 1.0))));
    const double center = window_center(bc_.sigma, idx);
    std::vector<cplx> overlap(m);
    for (std::size_t k = 0; k < m; ++k)
        overlap[k] = ef.values[k] * std::sqrt(2.0) * std::cos(center * fp.x[k]);
    const cplx ip = quadrature::simpson(std::span<const cplx>(overlap), h);
    cplx rot;
    if (std::abs(ip) > 1e-8) {
        rot = std::conj(ip) / std::abs(ip);
    } else {
        std::size_t kmax = 0;
        for (std::size_t k = 1; k < m; ++k)
            if (std::abs(ef.values[k]) > std::abs(ef.values[kmax])) kmax = k;
        rot = std::conj(ef.values[kmax]) / std::abs(ef.values[kmax]);
    }
    for (std::size_t k = 0; k < m; ++k) {
        ef.values[k] *= rot;
        ef.deriv[k] *= rot;
    }

    // Trapezoid vs Simpson disagreement as the quadrature error proxy.
    double trap = 0.5 * (std::norm(ef.values[0]) + std::norm(ef.values[m - 1]));
    for (std::size_t k = 1; k + 1 < m; ++k) trap += std::norm(ef.values[k]);
    trap *= h;
    ef.norm_error = std::abs(1.0 - trap);

    const cplx lambda = mu * mu;
    const Potential& q = integ_.potential();
    double fd = 0.0;
    for (std::size_t k = 1; k + 1 < m; ++k) {
        const cplx second =
            (ef.values[k + 1] - 2.0 * ef.values[k] + ef.values[k - 1]) / (h * h);
        fd = std::max(fd, std::abs(-second + (q(fp.x[k]) - lambda) * ef.values[k]));
    }
    ef.fd_residual = fd;

    ef.bc_residual =
        std::abs(f_.u1(ef.values.front(), ef.deriv.front(), ef.values.back(),
                       ef.deriv.back())) +
        std::abs(f_.u2(ef.values.front(), ef.deriv.front(), ef.values.back(),
                       ef.deriv.back()));
    return ef;
}

}  // namespace slspec
