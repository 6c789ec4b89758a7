#include <doctest.h>

#include <cmath>
#include <vector>

#include "slspec/asymptotics.hpp"
#include "slspec/errors.hpp"
#include "support.hpp"

using namespace slspec;

TEST_CASE("window centers") {
    CHECK(window_center(1, 5) == doctest::Approx(10.0 * pi));
    CHECK(window_center(1, 1) == doctest::Approx(2.0 * pi));
    CHECK(window_center(0, 5) == doctest::Approx(11.0 * pi));
    CHECK(window_center(0, 0) == doctest::Approx(pi));
}

TEST_CASE("branch predictions without a smooth correction") {
    SUBCASE("T1, sigma = 1") {
        const CanonicalBC cbc{Family::T1, 1, cplx(3.0), cplx(2.0), false};
        const PredictedPair pp = predict(cbc, 5, Regime::Unperturbed);
        CHECK(pp.n == 5);
        CHECK_CPLX(pp.mu1, cplx(10.0 * pi), 1e-13);
        // split = r / ((p - 1) pi n)
        CHECK_CPLX(pp.mu2, cplx(10.0 * pi + 1.0 / (5.0 * pi)), 1e-13);
    }
    SUBCASE("T2, sigma = 1 splits the other way") {
        const CanonicalBC cbc{Family::T2, 1, cplx(3.0), cplx(2.0), false};
        const PredictedPair pp = predict(cbc, 10, Regime::Unperturbed);
        CHECK_CPLX(pp.mu1, cplx(20.0 * pi), 1e-13);
        CHECK_CPLX(pp.mu2, cplx(20.0 * pi - 1.0 / (10.0 * pi)), 1e-13);
    }
    SUBCASE("T1, sigma = 0") {
        const CanonicalBC cbc{Family::T1, 0, cplx(3.0), cplx(2.0), false};
        const PredictedPair pp = predict(cbc, 10, Regime::Unperturbed);
        CHECK_CPLX(pp.mu1, cplx(21.0 * pi), 1e-13);
        // split = 2 r / ((p + 1)(2n + 1) pi)
        CHECK_CPLX(pp.mu2, cplx(21.0 * pi + 1.0 / (21.0 * pi)), 1e-13);
    }
    SUBCASE("T2, sigma = 0") {
        const CanonicalBC cbc{Family::T2, 0, cplx(3.0), cplx(2.0), false};
        const PredictedPair pp = predict(cbc, 10, Regime::Unperturbed);
        CHECK_CPLX(pp.mu1, cplx(21.0 * pi), 1e-13);
        CHECK_CPLX(pp.mu2, cplx(21.0 * pi + 1.0 / (21.0 * pi)), 1e-13);
    }
    SUBCASE("the L1 model keeps the same pair") {
        const CanonicalBC cbc{Family::T1, 1, cplx(3.0), cplx(2.0), false};
        const Potential q = Potential::sawtooth();
        const PredictedPair a = predict(cbc, 7, Regime::Unperturbed);
        const PredictedPair b = predict(cbc, 7, Regime::L1, &q);
        CHECK_CPLX(a.mu1, b.mu1, 1e-13);
        CHECK_CPLX(a.mu2, b.mu2, 1e-13);
    }
}

TEST_CASE("discriminants of the smooth model") {
    const Potential saw = Potential::sawtooth();  // q0 = -1/2, q1 = 1/2
    const Potential cos1 = Potential::cosine(1);  // q0 = q1 = 1

    SUBCASE("names and values") {
        const Discriminant d1 =
            discriminant({Family::T1, 1, cplx(2.0), cplx(1.0), false}, saw);
        CHECK(std::string(d1.name) == "D");
        // 2 (1 - 4)(-1) - 4 = 2
        CHECK_CPLX(d1.value, cplx(2.0), 1e-13);
        CHECK_CPLX(d1.root, cplx(std::sqrt(2.0)), 1e-13);

        const Discriminant d2 =
            discriminant({Family::T1, 0, cplx(2.0), cplx(1.0), false}, saw);
        CHECK(std::string(d2.name) == "D2");
        CHECK_CPLX(d2.value, cplx(-4.0), 1e-13);

        const Discriminant d3 =
            discriminant({Family::T2, 1, cplx(2.0), cplx(1.0), false}, saw);
        CHECK(std::string(d3.name) == "D3");
        // 2 (4 - 1)(-1) - 4 = -10
        CHECK_CPLX(d3.value, cplx(-10.0), 1e-13);

        const Discriminant d4 =
            discriminant({Family::T2, 0, cplx(2.0), cplx(1.0), false}, saw);
        CHECK(std::string(d4.name) == "D4");
        CHECK_CPLX(d4.value, cplx(-4.0), 1e-13);
    }

    SUBCASE("negative real values take the positive imaginary root") {
        // Exercises the signed-zero flush: a tiny negative imaginary part from
        // rounding must not flip the branch of the square root.
        const Discriminant a =
            discriminant({Family::T1, 1, cplx(0.0), cplx(1.0), false}, cos1);
        CHECK_CPLX(a.value, cplx(-4.0), 1e-13);
        CHECK_CPLX(a.root, cplx(0.0, 2.0), 1e-13);

        const Discriminant b =
            discriminant({Family::T1, 1, cplx(0.0), cplx(1.0), false}, saw);
        CHECK_CPLX(b.value, cplx(-6.0), 1e-13);
        CHECK_CPLX(b.root, cplx(0.0, std::sqrt(6.0)), 1e-13);
    }
}

TEST_CASE("smooth-model predictions") {
    const Potential saw = Potential::sawtooth();

    SUBCASE("T1, sigma = 1, D = 2") {
        const CanonicalBC cbc{Family::T1, 1, cplx(2.0), cplx(1.0), false};
        for (int n : {5, 12, 30}) {
            const PredictedPair pp = predict(cbc, n, Regime::AbsolutelyContinuous, &saw);
            const double c = 2.0 * pi * n;
            // mu_{n,1/2} = 2 pi n + (2 r -/+ i sqrt(D)) / (4 (p - 1) pi n)
            const cplx w1 = c + (2.0 - cplx(0.0, std::sqrt(2.0))) / (4.0 * pi * n);
            const cplx w2 = c + (2.0 + cplx(0.0, std::sqrt(2.0))) / (4.0 * pi * n);
            CHECK_CPLX(pp.mu1, w1, 1e-12);
            CHECK_CPLX(pp.mu2, w2, 1e-12);
        }
    }
    SUBCASE("T1, sigma = 0, D2 = -4") {
        // Negative discriminant: -/+ i sqrt(D2) is real, so both branches stay
        // on the axis and the plus branch lands exactly on the center.
        const CanonicalBC cbc{Family::T1, 0, cplx(2.0), cplx(1.0), false};
        const int n = 8;
        const PredictedPair pp = predict(cbc, n, Regime::AbsolutelyContinuous, &saw);
        const double c = (2.0 * n + 1.0) * pi;
        const double den = 2.0 * 3.0 * (2.0 * n + 1.0) * pi;
        CHECK_CPLX(pp.mu1, cplx(c + 4.0 / den), 1e-12);
        CHECK_CPLX(pp.mu2, cplx(c), 1e-12);
    }
    SUBCASE("T2, sigma = 1, D3 = -10") {
        const CanonicalBC cbc{Family::T2, 1, cplx(2.0), cplx(1.0), false};
        const int n = 9;
        const PredictedPair pp = predict(cbc, n, Regime::AbsolutelyContinuous, &saw);
        const double c = 2.0 * pi * n;
        const double den = 4.0 * (2.0 - 1.0) * pi * n;
        CHECK_CPLX(pp.mu1, cplx(c + (-2.0 + std::sqrt(10.0)) / den), 1e-12);
        CHECK_CPLX(pp.mu2, cplx(c + (-2.0 - std::sqrt(10.0)) / den), 1e-12);
    }
    SUBCASE("predictions conjugate through the adjoint form") {
        const CanonicalBC direct{Family::T1, 1, cplx(2.0), cplx(0.0, 2.0), false};
        const CanonicalBC adj = adjoint_of(direct);
        const PredictedPair pd = predict(direct, 6, Regime::AbsolutelyContinuous, &saw);
        const PredictedPair pa = predict(adj, 6, Regime::AbsolutelyContinuous, &saw);
        CHECK_CPLX(pa.mu1, std::conj(pd.mu1), 1e-12);
        CHECK_CPLX(pa.mu2, std::conj(pd.mu2), 1e-12);
    }
}

TEST_CASE("prediction failure modes") {
    const Potential saw = Potential::sawtooth();
    CHECK_THROWS_AS(predict({Family::T1, 1, cplx(1.0), cplx(2.0), false}, 5,
                            Regime::Unperturbed),
                    ViolatesRegularity);
    CHECK_THROWS_AS(predict({Family::T1, 1, cplx(3.0), cplx(2.0), false}, 5,
                            Regime::AbsolutelyContinuous),
                    KindMismatch);
    // D = 2 (1 - 4)(-1) - 4 * 1.5 = 0: the smooth model cannot separate branches.
    CHECK_THROWS_AS(predict({Family::T1, 1, cplx(2.0), cplx(std::sqrt(1.5)), false},
                            5, Regime::AbsolutelyContinuous, &saw),
                    ConditionViolated);
}

TEST_CASE("log-log slopes") {
    std::vector<int> n;
    std::vector<double> v;
    for (int k = 3; k <= 40; ++k) {
        n.push_back(k);
        v.push_back(1.0 / (double(k) * k));
    }
    CHECK(loglog_slope(n, v) == doctest::Approx(-2.0).epsilon(1e-6));

    const std::vector<int> few_n{3, 4};
    const std::vector<double> few_v{1.0, 0.5};
    CHECK(std::isnan(loglog_slope(few_n, few_v)));

    // Entries at the floor are ignored.
    std::vector<double> flat(n.size(), 1e-16);
    CHECK(std::isnan(loglog_slope(n, flat)));
}

TEST_CASE("residual tables") {
    std::vector<PredictedPair> pred;
    std::vector<cplx> got1, got2;
    for (int n = 5; n <= 20; ++n) {
        PredictedPair pp;
        pp.n = n;
        pp.mu1 = cplx(2.0 * pi * n);
        pp.mu2 = cplx(2.0 * pi * n + 1.0 / n);
        pred.push_back(pp);
        got1.push_back(pp.mu1 + cplx(1.0 / (n * n * n), 0.0));
        got2.push_back(pp.mu2 + cplx(0.0, 0.5 / (n * n * n)));
    }
    const ResidualTable t = residual_table(pred, got1, got2);
    REQUIRE(t.n.size() == pred.size());
    CHECK(t.res1[0] == doctest::Approx(1.0 / 125.0));
    CHECK(t.res2[0] == doctest::Approx(0.5 / 125.0));
    // n r_j ~ n^{-2} so both slopes sit near -2.
    CHECK(t.slope1 == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(t.slope2 == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("predicted branch gaps") {
    const CanonicalBC cbc{Family::T1, 1, cplx(3.0), cplx(2.0), false};
    const SimplicityReport rep = simplicity_report(cbc, 5, 40, Regime::Unperturbed);
    REQUIRE(rep.n.size() == 36);
    CHECK(rep.gap.front() == doctest::Approx(1.0 / (5.0 * pi)));
    CHECK(rep.gap.back() == doctest::Approx(1.0 / (40.0 * pi)));
    CHECK(rep.min_gap == doctest::Approx(1.0 / (40.0 * pi)));
    CHECK(rep.all_exceed_tau);

    const SimplicityReport tight =
        simplicity_report(cbc, 5, 40, Regime::Unperturbed, nullptr, 1.0);
    CHECK_FALSE(tight.all_exceed_tau);
}

TEST_CASE("automatic model selection") {
    const Tolerances tol;
    const CanonicalBC gen{Family::T1, 1, cplx(3.0), cplx(2.0), false};
    CHECK(auto_regime(Potential::zero(), gen, tol) == Regime::Unperturbed);
    CHECK(auto_regime(Potential::cosine(1), gen, tol) ==
          Regime::AbsolutelyContinuous);
    // Vanishing r with equal endpoint values: D = 0, smooth model rejected.
    CHECK(auto_regime(Potential::cosine(1),
                      {Family::T1, 1, cplx(2.0), cplx(0.0), false}, tol) ==
          Regime::L1);
    // Pairing condition fails exactly for this r.
    CHECK(auto_regime(Potential::sawtooth(),
                      {Family::T1, 1, cplx(2.0), cplx(std::sqrt(1.5)), false}, tol) ==
          Regime::L1);
    // Sampled data never counts as smooth.
    CHECK(auto_regime(Potential::from_samples({0.0, 1.0, 0.0}, Smoothness::L1), gen,
                      tol) == Regime::L1);
    // p^2 = 1 leaves the pairing condition undefined; fall back to L1.
    CHECK(auto_regime(Potential::cosine(1),
                      {Family::T1, 1, cplx(-1.0), cplx(2.0), false}, tol) ==
          Regime::L1);
}
