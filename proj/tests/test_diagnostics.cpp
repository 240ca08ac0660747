#include <doctest.h>

#include <cmath>

#include "ualign/diagnostics.hpp"

using namespace ualign;

namespace {

FlowState make_state(GridPtr g, double (*rho)(double), double (*u)(double), double t = 0.0) {
    return FlowState(
        ScalarField::sample(g, [rho](const std::array<double, 3>& x) { return rho(x[0]); }),
        ScalarField::sample(g, [u](const std::array<double, 3>& x) { return u(x[0]); }), t);
}

} // namespace

TEST_CASE("record computes the monitor set") {
    auto g = make_grid(1, 256);
    ShiftSet shifts(*g);

    FlowState eq(ScalarField::constant(g, 1.0), ScalarField::constant(g, 0.0));
    AuxiliaryFields aux = extract_auxiliary(eq, 1.0);
    DiagnosticsRecord r = record(eq, aux, nullptr, 0.75, shifts);
    CHECK(r.mass == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
    CHECK(r.V == 0.0);
    CHECK(r.lip_u <= 1e-12);

    FlowState s = make_state(
        g, [](double x) { return 1.0 + 0.5 * std::cos(x); }, [](double x) { return std::sin(x); });
    AuxiliaryFields aux2 = extract_auxiliary(s, 1.0);
    DiagnosticsRecord r2 = record(s, aux2, nullptr, 0.75, shifts);
    CHECK(r2.V == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r2.lip_u == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r2.rho_min == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r2.rho_max == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(r2.holder_u_sigma > 0.0);
}

TEST_CASE("check_apriori flags injected drifts only") {
    DiagnosticsRecord init;
    init.t = 0.0;
    init.mass = 2.0;
    init.momentum = 1.0;
    init.rho_min = 0.5;
    init.rho_max = 1.5;
    init.F_sup = 0.3;
    init.G_sup = 0.4;
    init.V = 1.0;

    std::vector<DiagnosticsRecord> series;
    for (int i = 1; i <= 4; ++i) {
        DiagnosticsRecord r = init;
        r.t = i;
        r.V = init.V * std::exp(-0.3 * i);
        series.push_back(r);
    }
    CHECK(check_apriori(series, init).empty());

    auto drifted = series;
    drifted[2].mass = 2.0 * (1.0 + 1e-6);
    auto v = check_apriori(drifted, init);
    REQUIRE(v.size() == 1);
    CHECK(v[0].name == "mass");

    auto fgrow = series;
    fgrow[1].F_sup = 0.3 * (1.0 + 1e-3);
    v = check_apriori(fgrow, init);
    REQUIRE(v.size() == 1);
    CHECK(v[0].name == "F_transport");

    auto vgrow = series;
    vgrow[3].V = vgrow[2].V * 1.5;
    v = check_apriori(vgrow, init);
    REQUIRE(v.size() == 1);
    CHECK(v[0].name == "V_monotone");

    auto collapse = series;
    collapse[3].rho_min = 0.2;
    v = check_apriori(collapse, init);
    REQUIRE(v.size() == 1);
    CHECK(v[0].name == "rho_floor");
}

TEST_CASE("flocking fit recovers a synthetic exponential rate") {
    auto g = make_grid(1, 128);
    const double rate = 0.5, ubar = 0.3;
    std::vector<FlowState> snaps;
    std::vector<DiagnosticsRecord> series;
    for (int i = 0; i <= 20; ++i) {
        double t = 0.5 * i;
        double amp = std::exp(-rate * t);
        FlowState s(ScalarField::constant(g, 1.0),
                    ScalarField::sample(g, [&](const std::array<double, 3>& x) {
                        return ubar + amp * 0.2 * std::sin(x[0]);
                    }),
                    t);
        DiagnosticsRecord r;
        r.t = t;
        r.V = 0.4 * amp;
        series.push_back(r);
        snaps.push_back(std::move(s));
    }
    FlockReport rep = fit_flocking(series, snaps);
    CHECK(rep.status == "fitted");
    CHECK(rep.u_bar == doctest::Approx(ubar).epsilon(1e-9));
    CHECK(rep.decay_rate_fit == doctest::Approx(rate).epsilon(1e-6));
    CHECK(rep.r_squared >= 0.999);
    // residuals against the final profile decrease
    for (std::size_t i = 1; i < rep.profile_residual.size(); ++i)
        CHECK(rep.profile_residual[i] <= rep.profile_residual[i - 1] + 1e-8);
}

TEST_CASE("aligned initial data gives a constant traveling state") {
    auto g = make_grid(1, 128);
    const double c = 0.7;
    std::vector<FlowState> snaps;
    std::vector<DiagnosticsRecord> series;
    for (int i = 0; i <= 6; ++i) {
        double t = 0.3 * i;
        // rho transported with speed c, u identically c
        FlowState s(ScalarField::sample(g, [&](const std::array<double, 3>& x) {
                        return 1.0 + 0.3 * std::cos(x[0] - c * t);
                    }),
                    ScalarField::constant(g, c), t);
        DiagnosticsRecord r;
        r.t = t;
        r.V = 0.0;
        series.push_back(r);
        snaps.push_back(std::move(s));
    }
    FlockReport rep = fit_flocking(series, snaps);
    CHECK(rep.u_bar == doctest::Approx(c).epsilon(1e-12));
    for (double d : rep.u_dev_sup) CHECK(d <= 1e-12);
    // the co-moving profile is constant in time
    for (double r : rep.profile_residual) CHECK(r <= 1e-9);
}

TEST_CASE("diagnostics csv round trip") {
    DiagnosticsRecord r;
    r.t = 0.25;
    r.mass = 6.28;
    r.momentum = 1.5;
    r.rho_min = 0.4;
    r.rho_max = 1.6;
    r.F_sup = 0.1;
    r.G_sup = 0.2;
    r.V = 0.9;
    r.lip_rho = 2.0;
    r.lip_u = 1.0;
    r.holder_u_sigma = 1.3;
    r.moc_margin_rho = 0.5;
    r.moc_margin_u = 0.6;
    r.events.push_back("blowup");
    std::string csv = diagnostics_csv({r});
    auto back = parse_diagnostics_csv(csv);
    REQUIRE(back.size() == 1);
    CHECK(back[0].t == r.t);
    CHECK(back[0].momentum == r.momentum);
    CHECK(back[0].moc_margin_u == r.moc_margin_u);
    REQUIRE(back[0].events.size() == 1);
    CHECK(back[0].events[0] == "blowup");
}
