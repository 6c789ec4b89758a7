#include <doctest.h>

#include <cmath>
#include <vector>

#include "slspec/errors.hpp"
#include "slspec/riesz_diag.hpp"
#include "support.hpp"

using namespace slspec;

namespace {

Eigenfunction sampled(double (*f)(double), std::size_t n) {
    Eigenfunction e;
    e.x.resize(n);
    e.values.resize(n);
    e.deriv.assign(n, cplx(0.0));
    const double h = 1.0 / double(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        e.x[k] = k * h;
        e.values[k] = f(e.x[k]);
    }
    return e;
}

double cos_mode(double x) { return std::sqrt(2.0) * std::cos(2.0 * pi * x); }
double sin_mode(double x) { return std::sqrt(2.0) * std::sin(2.0 * pi * x); }

DecayReport flat_decay(int sigma, int n_min, int n_max, double level) {
    DecayReport rep;
    rep.sigma = sigma;
    for (int n = n_min; n <= n_max; ++n) {
        rep.n.push_back(n);
        rep.d.push_back(level);
    }
    rep.tail_median = level;
    rep.verdict = decay_verdict(rep.d, rep.n, 0.02, &rep.tail_median, &rep.slope);
    return rep;
}

std::vector<PairAngleRecord> shrinking_angles(int n_min, int n_max) {
    std::vector<PairAngleRecord> a;
    for (int n = n_min; n <= n_max; ++n)
        a.push_back({n, 0.5 / n, cplx(0.0)});
    return a;
}

}  // namespace

TEST_CASE("pair angles of sampled functions") {
    const auto c = sampled(cos_mode, 257);
    const auto s = sampled(sin_mode, 257);

    const PairAngleRecord orth = pair_angle(c, s, 3);
    CHECK(orth.n == 3);
    CHECK(orth.angle == doctest::Approx(0.5 * pi).epsilon(1e-6));
    CHECK(std::abs(orth.inner) <= 1e-6);

    // acos amplifies quadrature error near a unit inner product; the angle is
    // only pinned to the square root of the grid accuracy.
    const PairAngleRecord same = pair_angle(c, c);
    CHECK(same.angle <= 1e-3);
    CHECK(std::abs(same.inner) == doctest::Approx(1.0).epsilon(1e-7));

    // Norm and grid contracts are enforced.
    auto unnormalized = c;
    for (auto& v : unnormalized.values) v *= 1.1;
    CHECK_THROWS_AS(pair_angle(unnormalized, s), NormViolation);
    const auto coarse = sampled(sin_mode, 129);
    CHECK_THROWS_AS(pair_angle(c, coarse), KindMismatch);
}

TEST_CASE("verdict assembly from synthetic evidence") {
    const CanonicalBC cbc{Family::T1, 1, cplx(3.0), cplx(2.0), false};
    const Potential q = Potential::sawtooth();

    SUBCASE("rough-split route with collapsing angles") {
        ConditionSet cs;
        cs.cond12 = flat_decay(1, 5, 20, 1e-8);
        REQUIRE(cs.cond12.verdict == CondVerdict::Holds);
        const auto angles = shrinking_angles(5, 20);
        const RieszReport rep = riesz_verdict(cbc, q, angles, cs);
        CHECK(rep.verdict == RieszVerdict::FailsRieszBasis);
        CHECK(rep.evidence.route == RieszRoute::RoughSplit);
        CHECK(rep.evidence.stride == 1);
        CHECK(rep.evidence.offset == 0);
        CHECK(rep.evidence.trend_to_zero);
        CHECK(rep.evidence.angle_slope == doctest::Approx(-1.0).epsilon(1e-6));
        CHECK(rep.evidence.first_angle == doctest::Approx(0.1));
        CHECK(rep.evidence.last_angle == doctest::Approx(0.025));
    }

    SUBCASE("decay failing on the whole sequence but holding on a stride") {
        // Every third entry decays, the rest stay large: the large
        // majority defeats stride 1 and both stride 2 phases, so the
        // search lands on stride 3 at offset 0.
        ConditionSet cs;
        cs.cond12.sigma = 1;
        for (int n = 5; n <= 24; ++n) {
            cs.cond12.n.push_back(n);
            cs.cond12.d.push_back((n - 5) % 3 == 0 ? 1e-9 : 0.5);
        }
        cs.cond12.verdict = decay_verdict(cs.cond12.d, cs.cond12.n, 0.02,
                                          &cs.cond12.tail_median, &cs.cond12.slope);
        CHECK(cs.cond12.verdict != CondVerdict::Holds);
        const RieszReport rep = riesz_verdict(cbc, q, shrinking_angles(5, 24), cs);
        CHECK(rep.verdict == RieszVerdict::FailsRieszBasis);
        CHECK(rep.evidence.route == RieszRoute::RoughSplit);
        CHECK(rep.evidence.stride == 3);
        CHECK(rep.evidence.offset == 0);
    }

    SUBCASE("smooth route when no decay evidence exists") {
        ConditionSet cs;
        cs.cond12 = flat_decay(1, 5, 20, 0.5);
        REQUIRE(cs.cond12.verdict == CondVerdict::Fails);
        EndpointCondition ec;
        ec.holds = true;
        ec.lhs = cplx(-1.0);
        ec.rhs = cplx(-2.0 / 3.0);
        cs.cond1314 = ec;
        const RieszReport rep = riesz_verdict(cbc, q, shrinking_angles(5, 20), cs);
        CHECK(rep.verdict == RieszVerdict::FailsRieszBasis);
        CHECK(rep.evidence.route == RieszRoute::SmoothSplit);
    }

    SUBCASE("no route leaves the verdict inconclusive even with a trend") {
        ConditionSet cs;
        cs.cond12 = flat_decay(1, 5, 20, 0.5);
        const RieszReport rep = riesz_verdict(cbc, q, shrinking_angles(5, 20), cs);
        CHECK(rep.verdict == RieszVerdict::Inconclusive);
        CHECK(rep.evidence.route == RieszRoute::None);
        CHECK(rep.evidence.trend_to_zero);
    }

    SUBCASE("a route without an angle trend stays inconclusive") {
        ConditionSet cs;
        cs.cond12 = flat_decay(1, 5, 20, 1e-8);
        std::vector<PairAngleRecord> flat;
        for (int n = 5; n <= 20; ++n) flat.push_back({n, 0.7, cplx(0.0)});
        const RieszReport rep = riesz_verdict(cbc, q, flat, cs);
        CHECK(rep.verdict == RieszVerdict::Inconclusive);
        CHECK(rep.evidence.route == RieszRoute::RoughSplit);
        CHECK_FALSE(rep.evidence.trend_to_zero);
    }
}

TEST_CASE("evaluate_conditions bundles both diagnostics") {
    const Tolerances tol;
    const ConditionSet smooth = evaluate_conditions(
        Potential::sawtooth(), {Family::T1, 1, cplx(2.0), cplx(1.0), false}, 5, 12, tol);
    CHECK(smooth.cond12.verdict == CondVerdict::Fails);
    REQUIRE(smooth.cond1314.has_value());
    CHECK(smooth.cond1314->holds);

    // p^2 = 1 leaves the endpoint condition undefined: absent, not thrown.
    const ConditionSet undef = evaluate_conditions(
        Potential::sawtooth(), {Family::T1, 1, cplx(-1.0), cplx(1.0), false}, 5, 12, tol);
    CHECK_FALSE(undef.cond1314.has_value());

    // Rough potentials carry no smooth-route condition.
    const ConditionSet rough = evaluate_conditions(
        Potential::from_samples({0.0, 1.0, 0.0}, Smoothness::L1),
        {Family::T1, 1, cplx(2.0), cplx(1.0), false}, 5, 12, tol);
    CHECK_FALSE(rough.cond1314.has_value());
}

TEST_CASE("end-to-end diagnosis: cosine potential fails through the rough route") {
    const CanonicalBC cbc{Family::T1, 1, cplx(3.0), cplx(2.0), false};
    const EigenSolver solver(cbc, Potential::cosine(1));
    const RieszReport rep = diagnose_riesz(solver, 5, 12);
    CHECK(rep.verdict == RieszVerdict::FailsRieszBasis);
    CHECK(rep.evidence.route == RieszRoute::RoughSplit);
    CHECK(rep.conditions.cond12.verdict == CondVerdict::Holds);
    REQUIRE(rep.angles.size() == 8);
    CHECK(rep.angles.front().n == 5);
    CHECK(rep.evidence.first_angle == doctest::Approx(0.0242).epsilon(0.05));
    CHECK(rep.evidence.last_angle == doctest::Approx(0.0101).epsilon(0.05));
    CHECK(rep.evidence.angle_slope == doctest::Approx(-0.9958).epsilon(0.05));
}

TEST_CASE("end-to-end diagnosis: sawtooth fails through the smooth route") {
    const CanonicalBC cbc{Family::T1, 1, cplx(2.0), cplx(1.0), false};
    const EigenSolver solver(cbc, Potential::sawtooth());
    const RieszReport rep = diagnose_riesz(solver, 5, 12);
    CHECK(rep.verdict == RieszVerdict::FailsRieszBasis);
    CHECK(rep.evidence.route == RieszRoute::SmoothSplit);
    REQUIRE(rep.conditions.cond1314.has_value());
    CHECK(rep.conditions.cond1314->holds);
}

TEST_CASE("end-to-end diagnosis: tuned coefficients stay inconclusive") {
    // r^2 = 1.5 makes the endpoint pairing an equality, closing both routes.
    const CanonicalBC cbc{Family::T1, 1, cplx(2.0), cplx(std::sqrt(1.5)), false};
    const EigenSolver solver(cbc, Potential::sawtooth());
    const RieszReport rep = diagnose_riesz(solver, 5, 12);
    CHECK(rep.verdict == RieszVerdict::Inconclusive);
    CHECK(rep.evidence.route == RieszRoute::None);
    REQUIRE(rep.conditions.cond1314.has_value());
    CHECK_FALSE(rep.conditions.cond1314->holds);
}
