#include <doctest.h>

#include <cmath>

#include "ualign/moc.hpp"

using namespace ualign;

TEST_CASE("moc evaluation matches the branch formulas") {
    Moc m1(1.0, 0.5, 1.0);
    CHECK(m1(1.0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(m1(std::exp(2.0)) == doctest::Approx(1.75).epsilon(1e-14));

    Moc m2(2.0, 0.5, 0.5);
    CHECK(m2(0.5) == doctest::Approx(1.5).epsilon(1e-14));

    CHECK_THROWS_AS(m1(0.0), std::invalid_argument);
    CHECK_THROWS_AS(m1(-1.0), std::invalid_argument);

    // continuity at the branch point
    CHECK(m1(1.0 - 1e-13) == doctest::Approx(m1(1.0 + 1e-13)).epsilon(1e-10));
}

TEST_CASE("moc is increasing and concave; scaling identity holds") {
    Moc m(0.7, 0.3, 0.2);
    double prev = 0.0;
    for (double xi : {1e-4, 1e-3, 1e-2, 0.1, 0.19, 0.2, 0.21, 0.5, 2.0, 50.0}) {
        double v = m(xi);
        CHECK(v > prev);
        prev = v;
        double h = 0.3 * xi;
        CHECK(m(xi + h) + m(std::max(xi - h, 1e-12)) - 2.0 * v <= 1e-12);
    }
    // omega_lambda(xi) = omega_1(xi/lambda)
    Moc unit(0.7, 0.3, 1.0);
    for (double xi : {0.01, 0.15, 0.2, 1.0, 7.0})
        CHECK(m(xi) == doctest::Approx(unit(xi / 0.2)).epsilon(1e-13));
    // derivative at 0+ is delta/lambda
    CHECK(m.derivative(1e-300) == doctest::Approx(0.7 / 0.2).epsilon(1e-10));
}

TEST_CASE("stable difference agrees with direct evaluation") {
    Moc m(1.3, 0.45, 0.8);
    for (double xi : {0.1, 0.5, 0.79, 0.81, 2.0, 10.0}) {
        for (double gap : {1e-3, 0.2, 3.0, -0.05}) {
            if (xi + gap <= 0) continue;
            CHECK(m.diff(xi, gap) == doctest::Approx(m(xi + gap) - m(xi)).epsilon(1e-11));
        }
    }
    // tiny gaps: the difference tracks the derivative
    for (double xi : {0.3, 5.0}) {
        double gap = 1e-11 * xi;
        CHECK(m.diff(xi, gap) == doctest::Approx(m.derivative(xi) * gap).epsilon(1e-6));
    }
}

TEST_CASE("log-lambda construction survives sub-representable scales") {
    Moc m = Moc::from_log_lambda(2.6e-6, 0.5, -1.2e6);
    CHECK(m.lambda() == 0.0); // underflows, by design
    double v = m(1.0);
    CHECK(std::isfinite(v));
    CHECK(v == doctest::Approx(2.6e-6 * (0.75 + 0.5 * 1.2e6)).epsilon(1e-12));
    CHECK(m(0.5) < v);
    CHECK(m.diff(1.0, 0.25) == doctest::Approx(0.5 * 2.6e-6 * std::log(1.25)).epsilon(1e-12));
}

TEST_CASE("admissible lambda follows the Lipschitz-data bound") {
    auto g = make_grid(1, 128);
    ScalarField f = ScalarField::sample(g, [](const auto& x) { return 0.3 * std::sin(x[0]); });
    // |f|=0.3, |grad f|=0.3: bound = 2 e^{-1.2/delta}
    CHECK(admissible_lambda(f, 1.0) == doctest::Approx(2.0 * std::exp(-1.2)).epsilon(1e-6));
    CHECK(admissible_lambda(f, 4.0) == doctest::Approx(2.0 * std::exp(-0.3)).epsilon(1e-6));
    CHECK(std::isinf(admissible_lambda(ScalarField::constant(g, 2.0), 1.0)));

    // |f|=1, |grad f|=2: e^{-4} at delta=1 and e^{-1} at delta=4
    ScalarField f2 = ScalarField::sample(g, [](const auto& x) { return std::sin(2.0 * x[0]); });
    CHECK(admissible_lambda(f2, 1.0) == doctest::Approx(std::exp(-4.0)).epsilon(1e-6));
    CHECK(admissible_lambda(f2, 4.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("MocPair thresholds") {
    Moc w1(0.25, 0.5, 0.01), w2(0.5, 0.5, 0.01);
    MocPair pair(w1, w2, 0.5, 0.3, 1.5, 1.0);
    CHECK(pair.log_Xi1 == doctest::Approx(std::log(0.01) + 2.0 * 1.5 / 0.25 - 1.5));
    CHECK(pair.log_Xi2 == doctest::Approx(std::log(0.01) + 2.0 * 1.0 / 0.5 - 1.5));
    CHECK_THROWS_AS(MocPair(Moc(0.25, 0.4, 0.01), w2, 0.5, 0.3, 1.5, 1.0), std::invalid_argument);
}

TEST_CASE("breakthrough scan obeys the data lemma and detects tight moduli") {
    auto g = make_grid(1, 256);
    ScalarField f = ScalarField::sample(g, [](const auto& x) { return std::sin(x[0]); });

    // constant field: any modulus passes
    ScanResult rc = scan_breakthrough(ScalarField::constant(g, 4.0), Moc(1.0, 0.5, 1.0), 1.0);
    CHECK(rc.pass);
    CHECK(rc.margin > 0.0);

    // admissible lambda from the data lemma
    double lam = admissible_lambda(f, 1.0);
    ScanResult ok = scan_breakthrough(f, Moc(1.0, 0.5, lam), 1.0);
    CHECK(ok.pass);

    // lambda = 1e3 makes omega'(0+) tiny; the modulus is already beaten at
    // the smallest lattice shift and the scan must fail
    Moc tight(1.0, 0.5, 1e3);
    ScanResult bad = scan_breakthrough(f, tight, 1.0);
    CHECK_FALSE(bad.pass);
    CHECK(tight(g->dx()) < 2.0 * std::sin(0.5 * g->dx())); // omega(dx) < max increment
}

TEST_CASE("holder seminorm approaches the Lipschitz norm as sigma -> 1") {
    for (int n : {64, 256}) {
        auto g = make_grid(1, n);
        ScalarField f = ScalarField::sample(g, [](const auto& x) { return std::sin(x[0]); });
        ShiftSet shifts(*g);
        double h1 = holder_seminorm(f, 1.0, shifts);
        CHECK(h1 == doctest::Approx(1.0).epsilon(0.1)); // lip_u = 1
    }
}
