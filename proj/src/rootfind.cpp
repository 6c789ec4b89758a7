#include "slspec/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slspec/errors.hpp"

namespace slspec {
namespace {

constexpr int kRefineDepth = 48;
constexpr double kTwoPi = 2.0 * pi;

struct CurveWinding {
    const CFunc& f;
    const std::function<cplx(double)>& curve;
    double floor = 0.0;

    cplx eval(double t) const {
        const cplx v = f(curve(t));
        if (std::abs(v) < floor) throw BoundaryZero("contour runs through a near-zero");
        return v;
    }

    double refine(double t0, cplx f0, double t1, cplx f1, int depth) const {
        const double d = std::arg(f1 * std::conj(f0));
        if (std::abs(d) < 0.5 * pi) return d;
        if (depth >= kRefineDepth)
            throw NonConvergence("phase refinement stalled on the contour");
        const double tm = 0.5 * (t0 + t1);
        const cplx fm = eval(tm);
        return refine(t0, f0, tm, fm, depth + 1) + refine(tm, fm, t1, f1, depth + 1);
    }
};

int winding_along(const CFunc& f, const std::function<cplx(double)>& curve,
                  std::size_t n) {
    if (n < 16) n = 16;
    std::vector<cplx> fs(n);
    std::vector<double> mags(n);
    for (std::size_t k = 0; k < n; ++k) {
        fs[k] = f(curve(static_cast<double>(k) / static_cast<double>(n)));
        mags[k] = std::abs(fs[k]);
    }
    std::vector<double> sorted = mags;
    std::nth_element(sorted.begin(), sorted.begin() + n / 2, sorted.end());
    const double median = sorted[n / 2];
    if (!(median > 0.0)) throw BoundaryZero("contour median magnitude vanishes");

    CurveWinding cw{f, curve, 1e-7 * median};
    for (std::size_t k = 0; k < n; ++k)
        if (mags[k] < cw.floor) throw BoundaryZero("contour sample too close to a zero");

    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = static_cast<double>(k) / static_cast<double>(n);
        const double t1 = static_cast<double>(k + 1) / static_cast<double>(n);
        sum += cw.refine(t0, fs[k], t1, fs[(k + 1) % n], 0);
    }
    const double w = sum / kTwoPi;
    const double nearest = std::round(w);
    if (std::abs(w - nearest) > 0.25)
        throw NonConvergence("winding sum is not an integer: " + std::to_string(w));
    return static_cast<int>(nearest);
}

}  // namespace

int winding_number(const CFunc& f, const Rect& box, std::size_t min_samples) {
    if (!(box.width() > 0.0) || !(box.height() > 0.0))
        throw NonConvergence("winding box is degenerate");
    const double w = box.width(), h = box.height();
    const double per = 2.0 * (w + h);
    std::function<cplx(double)> curve = [&box, w, h, per](double t) -> cplx {
        double s = t * per;
        if (s < w) return {box.re_lo + s, box.im_lo};
        s -= w;
        if (s < h) return {box.re_hi, box.im_lo + s};
        s -= h;
        if (s < w) return {box.re_hi - s, box.im_hi};
        s -= w;
        return {box.re_lo, box.im_hi - std::min(s, h)};
    };
    return winding_along(f, curve, min_samples);
}

int winding_circle(const CFunc& f, cplx center, double radius,
                   std::size_t min_samples) {
    std::function<cplx(double)> curve = [center, radius](double t) -> cplx {
        return center + radius * cplx{std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
    };
    return winding_along(f, curve, min_samples);
}

int multiplicity_of(const CFunc& f, cplx root, double radius,
                    std::size_t min_samples) {
    double r = radius;
    for (int attempt = 0; attempt < 5; ++attempt) {
        try {
            return winding_circle(f, root, r, min_samples);
        } catch (const BoundaryZero&) {
            r *= 0.7;  // another zero grazes the circle; tighten it
        }
    }
    return winding_circle(f, root, r, min_samples);
}

std::optional<cplx> newton_refine(const CFunc& f, cplx z0, const Rect& limit,
                                  const std::vector<cplx>& deflate,
                                  const FindOptions& opt, std::size_t* iters) {
    const Rect lim = limit.inflated(1.5);
    cplx z = z0;
    for (int it = 0; it < opt.max_newton; ++it) {
        if (!lim.contains(z)) return std::nullopt;
        const cplx fz = f(z);
        if (iters) *iters = static_cast<std::size_t>(it + 1);
        if (fz == cplx{}) return z;
        const double h = opt.fd_step * (1.0 + std::abs(z));
        const cplx fp = (f(z + h) - f(z - h)) / (2.0 * h);
        cplx ratio = fp / fz;  // logarithmic derivative
        for (const cplx& r : deflate) {
            const cplx d = z - r;
            if (d == cplx{}) return std::nullopt;
            ratio -= 1.0 / d;
        }
        if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag()) ||
            ratio == cplx{})
            return std::nullopt;
        const cplx step = -1.0 / ratio;
        z += step;
        if (std::abs(step) <= opt.newton_tol * (1.0 + std::abs(z))) return z;
    }
    return std::nullopt;
}

std::vector<Root> find_zeros(const CFunc& f, const CFunc& f_count, Rect box,
                             std::vector<cplx> seeds, FindOptions opt) {
    // Winding with inflation retries when the contour grazes a zero.
    auto count_on = [&](Rect& b) -> int {
        for (int k = 0;; ++k) {
            try {
                return winding_number(f_count, b, opt.boundary_samples);
            } catch (const BoundaryZero&) {
                if (k >= opt.max_inflate) throw;
                b = b.inflated(opt.inflate);
            }
        }
    };

    Rect work = box;
    const int total = count_on(work);
    if (total < 0) throw NonConvergence("negative winding count; function has poles?");

    struct Entry {
        cplx mu;
        int mult = 1;
        double residual = 0.0;
        std::size_t iters = 0;
        bool in_box = false;  // inside the (inflated) search box
    };
    std::vector<Entry> found;  // census roots, external grazers included

    auto positions = [&] {
        std::vector<cplx> v;
        v.reserve(found.size());
        for (const Entry& e : found) v.push_back(e.mu);
        return v;
    };
    auto in_box_mult = [&] {
        int m = 0;
        for (const Entry& e : found)
            if (e.in_box) m += e.mult;
        return m;
    };
    // Multiplicity circle radius that cannot swallow a neighbouring root.
    auto safe_radius = [&](cplx z) {
        double rad = opt.mult_radius;
        for (const Entry& e : found)
            if (std::abs(e.mu - z) > 0.0)
                rad = std::min(rad, 0.45 * std::abs(e.mu - z));
        return rad;
    };
    enum class Polish { NewRoot, Duplicate, Failed };
    auto try_root = [&](cplx z0) -> Polish {
        std::size_t iters = 0;
        const auto z = newton_refine(f, z0, work, positions(), opt, &iters);
        if (!z) return Polish::Failed;
        for (const Entry& e : found)
            if (std::abs(e.mu - *z) <= opt.mult_radius) return Polish::Duplicate;
        Entry e;
        e.mu = *z;
        e.residual = std::abs(f(*z));
        e.iters = iters;
        e.in_box = work.contains(*z, opt.mult_radius);
        if (!e.in_box) e.mult = multiplicity_of(f, *z, safe_radius(*z));
        found.push_back(e);
        return Polish::NewRoot;
    };

    if (total == 0) return {};

    for (const cplx& s : seeds) {
        if (in_box_mult() >= total) break;
        try_root(s);
    }
    if (in_box_mult() < total && !found.empty()) {
        // Fewer distinct roots than the census demands: some may be multiple.
        for (Entry& e : found)
            if (e.in_box) e.mult = multiplicity_of(f, e.mu, safe_radius(e.mu));
    }

    struct Item {
        Rect b;
        int depth;
    };
    std::vector<Item> stack{{work, 0}};
    std::string cluster_note;
    while (!stack.empty() && in_box_mult() < total) {
        Item item = stack.back();
        stack.pop_back();
        Rect bw = item.b;
        int c;
        try {
            c = count_on(bw);
        } catch (const BoundaryZero&) {
            // A zero glued to the inflated contour: fall back to blind polish.
            try_root(bw.center());
            continue;
        }
        auto remaining = [&] {
            int m = c;
            for (const Entry& e : found)
                if (bw.contains(e.mu, 1e-12)) m -= e.mult;
            return m;
        };
        if (remaining() <= 0) continue;
        try_root(bw.center());
        if (remaining() <= 0) continue;

        if (bw.diameter() <= 4.0 * opt.mult_radius || item.depth >= opt.max_depth) {
            // Roots within mult_radius of the box also participate: a pair
            // closer than the resolution limit may straddle the boundary, in
            // which case the inside twin is credited to the outside entry's
            // multiplicity circle.
            for (Entry& e : found)
                if (bw.contains(e.mu, opt.mult_radius))
                    e.mult = multiplicity_of(f, e.mu, safe_radius(e.mu));
            for (int jit = 0; remaining() > 0 && jit < 12; ++jit) {
                const double ang = kTwoPi * jit / 12.0;
                const double rad = 0.35 * bw.diameter() * (1.0 + jit % 3) / 3.0;
                const cplx z0 = bw.center() + rad * cplx{std::cos(ang), std::sin(ang)};
                if (try_root(z0) == Polish::NewRoot) {
                    for (Entry& e : found)
                        if (bw.contains(e.mu, opt.mult_radius))
                            e.mult = multiplicity_of(f, e.mu, safe_radius(e.mu));
                }
            }
            // A stubborn box is not fatal on its own; the global census
            // below decides whether anything is actually missing.
            if (remaining() > 0)
                cluster_note = " (unresolved cluster near " +
                               std::to_string(bw.center().real()) + " + " +
                               std::to_string(bw.center().imag()) + "i)";
            continue;
        }

        const cplx ctr = bw.center();
        stack.push_back({{bw.re_lo, ctr.real(), bw.im_lo, ctr.imag()}, item.depth + 1});
        stack.push_back({{ctr.real(), bw.re_hi, bw.im_lo, ctr.imag()}, item.depth + 1});
        stack.push_back({{bw.re_lo, ctr.real(), ctr.imag(), bw.im_hi}, item.depth + 1});
        stack.push_back({{ctr.real(), bw.re_hi, ctr.imag(), bw.im_hi}, item.depth + 1});
    }

    if (in_box_mult() != total)
        throw NonConvergence("found multiplicity " + std::to_string(in_box_mult()) +
                             " of " + std::to_string(total) + " in the search box" +
                             cluster_note);

    std::vector<Root> roots;
    for (const Entry& e : found)
        if (e.in_box) roots.push_back({e.mu, e.mult, e.residual, e.iters});
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
        if (a.mu.real() != b.mu.real()) return a.mu.real() < b.mu.real();
        return a.mu.imag() < b.mu.imag();
    });
    return roots;
}

}  // namespace slspec
