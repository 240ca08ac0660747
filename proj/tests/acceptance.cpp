// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ualign/lemma_verify.hpp"
#include "ualign/moc_integrals.hpp"
#include "ualign/param_select.hpp"
#include "ualign/scenario.hpp"

using namespace ualign;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string out_dir(const char* tag) {
    fs::path p = fs::temp_directory_path() / (std::string("ualign_acceptance_") + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

char buf[512];

// 1. Spectral operator exactness on pure modes.
Outcome criterion_spectral_exactness() {
    double worst = 0.0;
    for (double alpha : {0.5, 1.0, 1.5}) {
        for (int d : {1, 2}) {
            auto g = make_grid(d, 32);
            std::vector<std::array<int, 2>> modes =
                d == 1 ? std::vector<std::array<int, 2>>{{1, 0}, {3, 0}, {5, 0}}
                       : std::vector<std::array<int, 2>>{{1, 0}, {2, 3}, {0, 4}};
            for (auto k : modes) {
                ScalarField f = ScalarField::sample(g, [&](const std::array<double, 3>& x) {
                    return std::cos(k[0] * x[0] + k[1] * x[1]);
                });
                double knorm = std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1]);
                ScalarField lf = fractional_laplacian(f, alpha);
                double rel = (lf - std::pow(knorm, alpha) * f).sup_norm() / std::pow(knorm, alpha);
                worst = std::max(worst, rel);
            }
        }
    }
    std::snprintf(buf, sizeof buf, "worst relative error %.3e (tol 1e-12)", worst);
    return {worst <= 1e-12, buf};
}

// 2. Commutator force against the p.v. kernel quadrature.
Outcome criterion_commutator_oracle() {
    auto g = make_grid(1, 64);
    ScenarioConfig cfg;
    cfg.n = 64;
    cfg.initial.rho_amplitude = 0.4;
    cfg.initial.u_amplitude = 0.5;
    cfg.initial.u_mean = 0.1;
    cfg.initial.k_max = 6;
    cfg.seed = 2024;
    FlowState s = build_initial_data(cfg, g);

    const double alpha = 1.0;
    ScalarField force = alignment_force(s.rho, s.u, alpha, false);
    oracles::TrigSeries rs(s.rho), us(s.u);
    double c_alpha = riesz_constant(alpha, 1);
    auto fv = force.physical();
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
        double want =
            oracles::alignment_kernel_oracle(rs, us, alpha, c_alpha, g->node(i), g->length());
        worst = std::max(worst, std::abs(fv[static_cast<std::size_t>(i)] - want));
    }
    std::snprintf(buf, sizeof buf, "sup-norm mismatch %.3e on random band-limited data (tol 1e-4)",
                  worst);
    return {worst <= 1e-4, buf};
}

// 3. Conservation suite on the generic subcritical run.
Outcome criterion_conservation() {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::Generic;
    cfg.dim = 1;
    cfg.n = 512;
    cfg.solver.alpha = 1.5;
    cfg.solver.t_end = 10.0;
    cfg.solver.output_stride = 200;
    cfg.initial.rho_amplitude = 0.3;
    cfg.initial.u_amplitude = 0.4;
    cfg.initial.u_mean = 0.3;
    cfg.seed = 11;
    cfg.output_dir = out_dir("conservation");
    RunArtifacts art = run(cfg);
    if (art.status != "completed") return {false, "run ended with status " + art.status};

    const auto& first = art.records.front();
    double g_mass0 = 0.0, g_scale = 0.0;
    {
        AuxiliaryFields aux0 = extract_auxiliary(art.snapshots.front(), cfg.solver.alpha);
        g_mass0 = aux0.G.integral();
        g_scale = std::max(aux0.G.sup_norm(), 1e-3) * cfg.length;
    }
    double worst_mass = 0.0, worst_mom = 0.0, worst_gmass = 0.0, worst_f = 0.0, worst_g = 0.0;
    double rho_max_running = first.rho_max;
    for (std::size_t i = 0; i < art.records.size(); ++i) {
        const auto& r = art.records[i];
        double horizon = std::max(r.t, 0.25);
        rho_max_running = std::max(rho_max_running, r.rho_max);
        worst_mass = std::max(worst_mass,
                              std::abs(r.mass - first.mass) / (std::abs(first.mass) * horizon));
        worst_mom = std::max(worst_mom, std::abs(r.momentum - first.momentum) /
                                            (std::abs(first.momentum) * horizon));
        AuxiliaryFields aux = extract_auxiliary(art.snapshots[i], cfg.solver.alpha);
        worst_gmass =
            std::max(worst_gmass, std::abs(aux.G.integral() - g_mass0) / (g_scale * horizon));
        worst_f = std::max(worst_f, r.F_sup / first.F_sup);
        worst_g = std::max(worst_g, r.G_sup / (rho_max_running * first.F_sup));
    }
    bool pass = worst_mass <= 1e-9 && worst_mom <= 1e-7 && worst_gmass <= 1e-9 &&
                worst_f <= 1.0 + 1e-6 && worst_g <= 1.0 + 1e-6;
    std::snprintf(buf, sizeof buf,
                  "mass %.2e (1e-9) mom %.2e (1e-7) intG %.2e (1e-9) F %.9f G %.9f (1+1e-6)",
                  worst_mass, worst_mom, worst_gmass, worst_f, worst_g);
    return {pass, buf};
}

// 4. G0 = 0 is preserved by the GZero scenario.
Outcome criterion_gzero() {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::GZero;
    cfg.dim = 1;
    cfg.n = 256;
    cfg.solver.alpha = 1.5;
    cfg.solver.t_end = 1.0;
    cfg.solver.output_stride = 50;
    cfg.initial.rho_amplitude = 0.2;
    cfg.initial.k_max = 2;
    cfg.seed = 5;
    cfg.output_dir = out_dir("gzero");
    RunArtifacts art = run(cfg);
    if (art.status != "completed") return {false, "run ended with status " + art.status};
    double worst = 0.0;
    for (const auto& r : art.records) worst = std::max(worst, r.G_sup);
    std::snprintf(buf, sizeof buf, "max sup|G(t)| = %.3e over t in [0,1] (tol 1e-6)", worst);
    return {worst <= 1e-6, buf};
}

// 5. Lemma verification sweeps + delta linearity.
Outcome criterion_lemma_sweeps() {
    std::string detail;
    bool pass = true;
    for (double alpha : {0.5, 1.0, 1.5}) {
        double mu_cap = std::min(alpha, 1.0);
        std::vector<LemmaParams> sweep;
        for (double lambda : {0.5, 2.0})
            for (double delta2 : {0.5, 1.0})
                for (double mu_frac : {0.4, 0.8}) {
                    LemmaParams p;
                    p.lambda = lambda;
                    p.delta2 = delta2;
                    p.kappa = 0.5;
                    p.mu = mu_frac * mu_cap;
                    sweep.push_back(p);
                }
        for (int d : {1, 2}) {
            EmpiricalConstants consts = fit_empirical_constants(alpha, d, sweep, 40);
            std::vector<LemmaId> ids{LemmaId::DissipationLower, LemmaId::AUpper, LemmaId::KUpper};
            if (alpha > 1.0) ids.push_back(LemmaId::RieszMoc);
            for (LemmaId id : ids) {
                for (const auto& p : {sweep[0], sweep[5]}) {
                    LemmaReport rep = verify_lemma(id, alpha, d, p, consts, 40);
                    if (!rep.pass) {
                        pass = false;
                        std::snprintf(buf, sizeof buf, "[%s a=%g d=%d FAILS] ", lemma_name(id),
                                      alpha, d);
                        detail += buf;
                    }
                }
            }
            // refit at doubled delta: envelopes move by < 1%
            auto sweep2 = sweep;
            for (auto& p : sweep2) p.delta2 *= 2.0;
            EmpiricalConstants c2 = fit_empirical_constants(alpha, d, sweep2, 40);
            double drift = std::max({std::abs(c2.C1 / consts.C1 - 1.0),
                                     std::abs(c2.C2 / consts.C2 - 1.0),
                                     std::abs(c2.C3 / consts.C3 - 1.0)});
            if (drift > 0.01) {
                pass = false;
                std::snprintf(buf, sizeof buf, "[delta-doubling drift %.3e a=%g d=%d] ", drift,
                              alpha, d);
                detail += buf;
            }
        }
    }
    // raw value linearity of D and A in delta
    Moc m(1.0, 0.5, 1.0), m2 = m.scaled_delta(2.0);
    for (double xi : {0.2, 3.0}) {
        double rd = dissipation_D_quadrature(xi, m2, 1.0).value /
                    dissipation_D_quadrature(xi, m, 1.0).value;
        double ra = A_quadrature(xi, m2, 1.0, 1).value / A_quadrature(xi, m, 1.0, 1).value;
        if (std::abs(rd - 2.0) > 2e-8 || std::abs(ra - 2.0) > 2e-8) {
            pass = false;
            detail += "[value linearity off] ";
        }
    }
    if (detail.empty()) detail = "all sweeps pass; envelope constants delta-stable to 1%";
    return {pass, detail};
}

// 6. Critical-scaling covariance of the D and A quadratures.
Outcome criterion_critical_scaling() {
    double worst = 0.0;
    for (double s : {2.0, 10.0}) {
        Moc base(1.0, 0.5, 0.5), scaled(1.0, 0.5, 0.5 * s);
        for (double xi : {0.15, 0.6}) {
            double d0 = dissipation_D_quadrature(xi, base, 1.0).value;
            double d1 = dissipation_D_quadrature(s * xi, scaled, 1.0).value;
            worst = std::max(worst, std::abs(s * d1 / d0 - 1.0));
            for (int dim : {1, 2}) {
                double a0 = A_quadrature(xi, base, 1.0, dim).value;
                double a1 = A_quadrature(s * xi, scaled, 1.0, dim).value;
                worst = std::max(worst, std::abs(s * a1 / a0 - 1.0));
            }
        }
    }
    std::snprintf(buf, sizeof buf, "worst covariance defect %.3e (tol 1e-6)", worst);
    return {worst <= 1e-6, buf};
}

RunArtifacts critical_run_cache;
bool critical_run_done = false;

const RunArtifacts& critical_run() {
    if (!critical_run_done) {
        ScenarioConfig cfg;
        cfg.scenario = Scenario::CriticalDemo;
        cfg.dim = 1;
        cfg.n = 512;
        cfg.solver.alpha = 1.0;
        cfg.solver.t_end = 10.0;
        cfg.solver.output_stride = 100;
        cfg.initial.rho_amplitude = 0.4;
        cfg.initial.u_amplitude = 0.6;
        cfg.initial.u_mean = 0.3;
        cfg.initial.k_max = 3;
        cfg.moc.enabled = true;
        cfg.seed = 7;
        cfg.output_dir = out_dir("critical");
        critical_run_cache = run(cfg);
        critical_run_done = true;
    }
    return critical_run_cache;
}

// 7. MOC propagation along the critical run.
Outcome criterion_moc_propagation() {
    const RunArtifacts& art = critical_run();
    if (art.status != "completed") return {false, "run ended with status " + art.status};
    if (!art.moc_selection) return {false, "no MOC selection attached to the run"};
    double worst_rho = 1e300, worst_u = 1e300;
    for (const auto& r : art.records) {
        worst_rho = std::min(worst_rho, r.moc_margin_rho);
        worst_u = std::min(worst_u, r.moc_margin_u);
    }
    bool pass = worst_rho > 0.0 && worst_u > 0.0;
    double rate = art.flocking ? art.flocking->decay_rate_fit : 0.0;
    std::snprintf(buf, sizeof buf,
                  "min margins rho %.3e / u %.3e over t in [0,10] (fitted c0=%.3g)", worst_rho,
                  worst_u, rate);
    return {pass, buf};
}

// 8. Strong flocking along the same run.
Outcome criterion_flocking() {
    const RunArtifacts& art = critical_run();
    if (!art.flocking) return {false, "no flocking report"};
    const FlockReport& f = *art.flocking;
    bool pass = f.status == "fitted" && f.r_squared >= 0.95 && f.decay_rate_fit > 0.0;
    // |u - u_bar|_inf decreasing over the final half, residual monotone
    std::size_t half = f.u_dev_sup.size() / 2;
    for (std::size_t i = half + 1; i < f.u_dev_sup.size(); ++i)
        if (f.u_dev_sup[i] > f.u_dev_sup[i - 1] + 1e-10) pass = false;
    for (std::size_t i = 1; i < f.profile_residual.size(); ++i)
        if (f.profile_residual[i] > f.profile_residual[i - 1] + 1e-8) pass = false;
    std::snprintf(buf, sizeof buf, "rate %.4g, R^2 %.4f (>=0.95), residual monotone",
                  f.decay_rate_fit, f.r_squared);
    return {pass, buf};
}

// 9. Supercritical criterion monitor + frozen-Burgers blow-up control.
Outcome criterion_supercritical() {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::SupercriticalCriterion;
    cfg.dim = 1;
    cfg.n = 512;
    cfg.solver.alpha = 0.5;
    cfg.sigma = 0.75;
    cfg.solver.t_end = 5.0;
    cfg.solver.output_stride = 50;
    cfg.initial.rho_amplitude = 0.4;
    cfg.initial.u_amplitude = 0.2;
    cfg.initial.u_mean = 0.2;
    cfg.seed = 13;
    cfg.output_dir = out_dir("supercritical");
    RunArtifacts art = run(cfg);
    if (art.status != "completed") return {false, "alignment run ended with " + art.status};

    const double expo = 1.0 / (cfg.sigma - 1.0 + cfg.solver.alpha); // = 4
    const auto& r0 = art.records.front();
    double C_fit = r0.lip_rho / (1.0 + std::pow(r0.holder_u_sigma, expo));
    double worst_ratio = 0.0, max_holder = 0.0;
    for (const auto& r : art.records) {
        max_holder = std::max(max_holder, r.holder_u_sigma);
        double bound = C_fit * (1.0 + std::pow(r.holder_u_sigma, expo));
        worst_ratio = std::max(worst_ratio, r.lip_rho / bound);
    }
    bool lip_ok = worst_ratio <= 2.0 && std::isfinite(max_holder);

    ScenarioConfig fb;
    fb.scenario = Scenario::FrozenBurgers;
    fb.solver.frozen_density = true;
    fb.dim = 1;
    fb.n = 512;
    fb.solver.alpha = 0.5;
    fb.solver.t_end = 3.0;
    fb.solver.output_stride = 50;
    fb.solver.blowup_gradient_threshold = 100.0; // ~25x the initial gradient
    fb.initial.u_mean = 0.0;
    fb.initial.u_amplitude = 3.0;
    fb.initial.k_max = 2;
    fb.seed = 13;
    fb.output_dir = out_dir("burgers_control");
    RunArtifacts control = run(fb);
    bool blew = control.status == "blowup" &&
                control.event_time < fb.solver.t_end;

    std::snprintf(buf, sizeof buf,
                  "lip_rho/bound max %.3f (<=2), holder bounded %.3g; control run: %s at t=%.3g",
                  worst_ratio, max_holder, control.status.c_str(), control.event_time);
    return {lip_ok && blew, buf};
}

// 10. Time integration order on the smooth frozen-Burgers problem.
Outcome criterion_integration_order() {
    auto g = make_grid(1, 64);
    ScalarField u0 = ScalarField::sample(g, [](const std::array<double, 3>& x) {
        return 0.8 * std::sin(x[0]) + 0.2 * std::cos(2.0 * x[0]);
    });
    ScalarField rho0 = ScalarField::constant(g, 1.0);
    const double T = 0.4;

    auto solve = [&](TimeScheme scheme, double dt) {
        SolverConfig cfg;
        cfg.alpha = 1.5;
        cfg.frozen_density = true;
        cfg.scheme = scheme;
        FlowState s(rho0, u0);
        int steps = static_cast<int>(std::round(T / dt));
        for (int i = 0; i < steps; ++i) s = step(s, cfg, dt);
        return s.u;
    };

    auto slope_for = [&](TimeScheme scheme) {
        std::vector<double> errs;
        ScalarField ref = solve(scheme, 0.4e-3);
        for (double dt : {8e-3, 4e-3, 2e-3}) errs.push_back((solve(scheme, dt) - ref).sup_norm());
        double s1 = std::log2(errs[0] / errs[1]);
        double s2 = std::log2(errs[1] / errs[2]);
        return 0.5 * (s1 + s2);
    };

    double rk4 = slope_for(TimeScheme::ExplicitRK4);
    double imex = slope_for(TimeScheme::ImexCN);
    bool pass = std::abs(rk4 - 4.0) <= 0.2 && std::abs(imex - 2.0) <= 0.2;
    std::snprintf(buf, sizeof buf, "RK4 slope %.3f (4 +/- 0.2), IMEX slope %.3f (2 +/- 0.2)", rk4,
                  imex);
    return {pass, buf};
}

} // namespace

int main() {
    using Clock = std::chrono::steady_clock;
    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> fn;
    };
    std::vector<Entry> criteria{
        {1, "spectral operator exactness", criterion_spectral_exactness},
        {2, "commutator vs kernel oracle", criterion_commutator_oracle},
        {3, "conservation suite", criterion_conservation},
        {4, "G0=0 preservation", criterion_gzero},
        {5, "lemma verification sweeps", criterion_lemma_sweeps},
        {6, "critical-scaling covariance", criterion_critical_scaling},
        {7, "MOC propagation (critical run)", criterion_moc_propagation},
        {8, "strong flocking", criterion_flocking},
        {9, "supercritical criterion monitor", criterion_supercritical},
        {10, "time-integration order", criterion_integration_order},
    };

    int failures = 0;
    for (auto& c : criteria) {
        auto start = Clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(Clock::now() - start).count();
        std::printf("[%s] criterion %2d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id,
                    c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) FAILED\n", failures);
    else std::printf("all acceptance criteria pass\n");
    return failures == 0 ? 0 : 1;
}
