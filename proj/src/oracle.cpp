#include "slspec/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "slspec/asymptotics.hpp"
#include "slspec/determinant.hpp"
#include "slspec/errors.hpp"

namespace slspec {
namespace {

constexpr double kRescaleAt = 1e150;

PencilProblem sample_grid(const Potential& q, int N) {
    if (N < 8) throw ConfigError("pencil grid too small");
    PencilProblem p;
    p.N = N;
    p.h = 1.0 / N;
    p.q.resize(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) p.q[static_cast<std::size_t>(k)] = q(k * p.h);
    return p;
}

}  // namespace

PencilProblem make_pencil(const BCFunctionals& bf, const Potential& q, int N) {
    PencilProblem p = sample_grid(q, N);
    p.bf = bf;
    return p;
}

PencilProblem make_pencil(const CanonicalBC& cbc, const Potential& q, int N) {
    return make_pencil(BCFunctionals::from(cbc), q, N);
}

PencilProblem make_dirichlet_pencil(const Potential& q, int N) {
    PencilProblem p = sample_grid(q, N);
    p.bf = BCFunctionals{};
    p.dirichlet = true;
    return p;
}

LogDet pencil_det(const PencilProblem& prob, cplx lambda) {
    const int N = prob.N;
    const double h = prob.h;
    const double h2 = h * h;

    // Basis recurrences y_{k+1} = (2 + h^2 (q_k - lambda)) y_k - y_{k-1}
    // started from the cosine-like (1, 1) and sine-like (0, h) data. Unit
    // data (1,0)/(0,1) would make both solutions share a 1/h-scaled sine
    // component and the boundary 2x2 determinant would cancel ~9 digits at
    // every lambda; these initial values keep it conditioned like the
    // continuum characteristic function. The IC determinant h is divided
    // out of the final value.
    cplx u0{1.0}, u1{1.0};
    cplx v0{}, v1{h};
    double log_u = 0.0, log_v = 0.0;
    cplx u_nm2{}, v_nm2{};  // values at index N-2 (valid once N >= 2)
    for (int k = 1; k < N; ++k) {
        const cplx c = 2.0 + h2 * (prob.q[static_cast<std::size_t>(k)] - lambda);
        const cplx u2 = c * u1 - u0;
        const cplx v2 = c * v1 - v0;
        u0 = u1;
        u1 = u2;
        v0 = v1;
        v1 = v2;
        const double mu_mag = std::max(std::abs(u0), std::abs(u1));
        if (mu_mag > kRescaleAt) {
            u0 /= mu_mag;
            u1 /= mu_mag;
            log_u += std::log(mu_mag);
        }
        const double mv_mag = std::max(std::abs(v0), std::abs(v1));
        if (mv_mag > kRescaleAt) {
            v0 /= mv_mag;
            v1 /= mv_mag;
            log_v += std::log(mv_mag);
        }
    }
    // After the loop: (u0, u1) = (y_{N-1}, y_N); recover y_{N-2} from the
    // recurrence at k = N-1 to feed the one-sided stencil.
    const cplx cN = 2.0 + h2 * (prob.q[static_cast<std::size_t>(N - 1)] - lambda);
    u_nm2 = cN * u0 - u1;
    v_nm2 = cN * v0 - v1;

    // Boundary functionals on the initial data (y_0, y_1, y_2) and the tail.
    auto apply = [&](cplx y0, cplx y1v, cplx y2, cplx ynm2, cplx ynm1, cplx yn,
                     bool first_row) -> cplx {
        if (prob.dirichlet) return first_row ? y0 : yn;
        const cplx d0 = (-3.0 * y0 + 4.0 * y1v - y2) / (2.0 * h);
        const cplx d1 = (3.0 * yn - 4.0 * ynm1 + ynm2) / (2.0 * h);
        if (first_row)
            return prob.bf.u1_d0 * d0 + prob.bf.u1_d1 * d1 + prob.bf.u1_v0 * y0 +
                   prob.bf.u1_v1 * yn;
        return prob.bf.u2_v0 * y0 + prob.bf.u2_v1 * yn;
    };

    // Head values (y_0, y_1, y_2) are exact; log_u / log_v apply only to the
    // tail, so both parts are tracked at their own scale.
    const cplx c1 = 2.0 + h2 * (prob.q[1] - lambda);
    const cplx u_head0{1.0}, u_head1{1.0}, u_head2 = c1 - 1.0;
    const cplx v_head0{0.0}, v_head1{h}, v_head2 = c1 * h;

    // Row values split into head (unscaled) and tail (scaled) parts:
    // U(y) = head_part + e^{log} tail_part is evaluated at matched scaling.
    const double log_max = std::max(log_u, log_v);
    const double su = std::exp(log_u - log_max);   // <= 1
    const double sv = std::exp(log_v - log_max);
    const double shead = std::exp(-log_max);       // scale of unscaled head terms

    auto row = [&](bool first_row, cplx h0, cplx h1, cplx h2v, cplx tnm2, cplx tnm1,
                   cplx tn, double tail_scale) -> cplx {
        return apply(h0 * shead, h1 * shead, h2v * shead, tnm2 * tail_scale,
                     tnm1 * tail_scale, tn * tail_scale, first_row);
    };

    const cplx a11 = row(true, u_head0, u_head1, u_head2, u_nm2, u0, u1, su);
    const cplx a21 = row(false, u_head0, u_head1, u_head2, u_nm2, u0, u1, su);
    const cplx a12 = row(true, v_head0, v_head1, v_head2, v_nm2, v0, v1, sv);
    const cplx a22 = row(false, v_head0, v_head1, v_head2, v_nm2, v0, v1, sv);

    const cplx det2 = a11 * a22 - a12 * a21;
    if (det2 == cplx{})
        throw SingularFactorization("pencil determinant vanished exactly");

    LogDet out;
    // det(A - lambda B) = (-1/h^2)^(N-1) * det2 * e^{2 log_max} / h,
    // the trailing h being the initial-data determinant of the basis pair.
    out.log_abs = std::log(std::abs(det2)) + 2.0 * log_max +
                  (N - 1) * std::log(1.0 / h2) + std::log(1.0 / h);
    out.phase = det2 / std::abs(det2);
    if ((N - 1) % 2 != 0) out.phase = -out.phase;
    return out;
}

CFunc pencil_func(const PencilProblem& prob, cplx ref_lambda) {
    double ref = 0.0;
    try {
        ref = pencil_det(prob, ref_lambda).log_abs;
    } catch (const SingularFactorization&) {
        ref = pencil_det(prob, ref_lambda + cplx{1e-3, 1e-3}).log_abs;
    }
    return [prob, ref](cplx lambda) -> cplx {
        try {
            const LogDet d = pencil_det(prob, lambda);
            return d.phase * std::exp(d.log_abs - ref);
        } catch (const SingularFactorization&) {
            return cplx{};
        }
    };
}

Rect lambda_region(int sigma, int n) {
    const double c = window_center(sigma, n);
    const double half = 0.5 * pi;
    return {(c - half) * (c - half) - half * half, (c + half) * (c + half),
            -pi * (c + half), pi * (c + half)};
}

double oracle_error_bar(double err_constant, double h, cplx lambda) {
    return err_constant * h * h * (1.0 + std::norm(lambda));
}

std::vector<OracleEig> oracle_eigs(const PencilProblem& prob, const Rect& region,
                                   double err_constant, int count_hint,
                                   std::vector<cplx> seeds) {
    const CFunc f = pencil_func(prob, region.center());
    FindOptions opt;
    // lambda-plane scale: a mu-space gap delta maps to about 2 sqrt(lambda) delta.
    const double scale = 1.0 + 2.0 * std::sqrt(std::abs(region.center()));
    opt.mult_radius = 1e-4 * scale;
    std::vector<Root> roots = find_zeros(f, f, region, std::move(seeds), opt);
    std::vector<OracleEig> out;
    out.reserve(count_hint > 0 ? static_cast<std::size_t>(count_hint) : roots.size());
    for (const Root& r : roots)
        out.push_back({r.mu, oracle_error_bar(err_constant, prob.h, r.mu), r.multiplicity});
    return out;
}

double calibrate_error_constant(const CanonicalBC& cbc, int N) {
    const Potential qz = Potential::zero();
    const PencilProblem prob = make_pencil(cbc, qz, N);
    const CFunc closed = [&cbc](cplx mu) {
        return delta_closed(cbc, mu, ClosedKind::Unperturbed);
    };
    double worst = 0.0;
    for (int n = 2; n <= 6; n += 2) {
        const double c = window_center(cbc.sigma, n);
        const Rect mu_box{c - 0.5 * pi, c + 0.5 * pi, -0.5 * pi, 0.5 * pi};
        const PredictedPair pp = predict(cbc, n, Regime::Unperturbed);
        const std::vector<Root> exact =
            find_zeros(closed, closed, mu_box, {pp.mu1, pp.mu2});

        std::vector<cplx> seeds;
        for (const Root& r : exact) seeds.push_back(r.mu * r.mu);
        const std::vector<OracleEig> fd =
            oracle_eigs(prob, lambda_region(cbc.sigma, n), 0.0, -1, seeds);
        for (const Root& r : exact) {
            const cplx lam = r.mu * r.mu;
            double best = std::numeric_limits<double>::infinity();
            for (const OracleEig& oe : fd) best = std::min(best, std::abs(oe.lambda - lam));
            if (!fd.empty())
                worst = std::max(worst, best / (prob.h * prob.h * (1.0 + std::norm(lam))));
        }
    }
    if (!(worst > 0.0))
        throw NonConvergence("error-constant calibration found no reference roots");
    return 3.0 * worst;
}

}  // namespace slspec
