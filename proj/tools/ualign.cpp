// Command-line front end: scenario runs, lemma verification sweeps,
// MOC parameter selection, and report regeneration.
//
// Exit codes: 0 completed/pass, 1 usage or I/O error, 2 numerical event,
// 3 lemma violation or infeasible selection.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "ualign/lemma_verify.hpp"
#include "ualign/param_select.hpp"
#include "ualign/scenario.hpp"

namespace fs = std::filesystem;
using namespace ualign;

namespace {

int cmd_run(const std::string& config_path) {
    ScenarioConfig cfg = load_config(config_path);
    RunArtifacts art = run(cfg);
    std::printf("status: %s\n", art.status.c_str());
    if (art.status != "completed")
        std::printf("event at t=%.6g: %s\n", art.event_time, art.event_detail.c_str());
    if (art.flocking && art.flocking->status == "fitted")
        std::printf("flocking: u_bar=%.6g rate=%.6g R2=%.4f\n", art.flocking->u_bar,
                    art.flocking->decay_rate_fit, art.flocking->r_squared);
    for (const auto& v : art.violations)
        std::printf("violation [%s] %s\n", v.name.c_str(), v.detail.c_str());
    std::printf("artifacts in %s\n", art.output_dir.c_str());
    return art.status == "completed" ? 0 : 2;
}

std::vector<LemmaParams> sweep_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sweep file " + path);
    std::vector<LemmaParams> sweep;
    std::string line;
    std::getline(in, line); // header: delta2,kappa,mu,lambda,V0,rhoF0
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        LemmaParams p;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &p.delta2, &p.kappa, &p.mu,
                        &p.lambda, &p.V0, &p.rhoF0) < 4)
            throw std::runtime_error("sweep file: bad row '" + line + "'");
        sweep.push_back(p);
    }
    if (sweep.empty()) throw std::runtime_error("sweep file has no rows");
    return sweep;
}

int cmd_verify_lemmas(double alpha, int dim, const std::string& sweep_path,
                      const std::string& out_dir, int n_xi) {
    std::vector<LemmaParams> sweep =
        sweep_path.empty() ? default_sweep(alpha) : sweep_from_csv(sweep_path);
    EmpiricalConstants consts = fit_empirical_constants(alpha, dim, sweep, n_xi);
    std::printf("fitted envelopes (alpha=%g, d=%d): C1=%.6g C2=%.6g C3=%.6g C4=%.6g C4t=%.6g\n",
                alpha, dim, consts.C1, consts.C2, consts.C3, consts.C4, consts.C4t);

    std::vector<LemmaId> lemmas{LemmaId::DissipationLower, LemmaId::AUpper, LemmaId::KUpper};
    if (alpha > 1.0) {
        lemmas.push_back(LemmaId::RieszMoc);
        lemmas.push_back(LemmaId::KSubcUpper);
    }

    bool all_pass = true;
    std::string csv;
    nlohmann::json jreports = nlohmann::json::array();
    bool header = true;
    for (LemmaId id : lemmas) {
        for (const auto& p : sweep) {
            LemmaReport rep = verify_lemma(id, alpha, dim, p, consts, n_xi);
            all_pass = all_pass && rep.pass;
            append_report_csv(rep, csv, header);
            header = false;
            jreports.push_back(nlohmann::json::parse(report_to_json(rep)));
            std::printf("%-26s delta2=%.3g kappa=%.3g mu=%.3g lambda=%.3g : %s\n",
                        lemma_name(id), p.delta2, p.kappa, p.mu, p.lambda,
                        rep.pass ? "pass" : "FAIL");
        }
    }

    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / "lemma_sweep.csv") << csv;
    nlohmann::json top;
    top["alpha"] = alpha;
    top["d"] = dim;
    top["constants"] = {{"C1", consts.C1}, {"C2", consts.C2}, {"C3", consts.C3},
                        {"C4", consts.C4}, {"C4t", consts.C4t}, {"C0", consts.C0},
                        {"provenance", consts.provenance}};
    top["reports"] = jreports;
    top["pass"] = all_pass;
    std::ofstream(fs::path(out_dir) / "lemma_reports.json") << top.dump(2) << "\n";
    std::printf("%s; reports in %s\n", all_pass ? "all lemmas pass" : "LEMMA VIOLATIONS found",
                out_dir.c_str());
    return all_pass ? 0 : 3;
}

int cmd_select_params(const std::string& regime_name_str, double alpha, int dim,
                      const SelectionInputs& in) {
    Regime regime;
    if (regime_name_str == "subcritical") regime = Regime::Subcritical;
    else if (regime_name_str == "critical") regime = Regime::Critical;
    else if (regime_name_str == "supercritical") regime = Regime::Supercritical;
    else throw CLI::ValidationError("regime must be subcritical|critical|supercritical");

    EmpiricalConstants consts = fit_empirical_constants(alpha, dim, default_sweep(alpha));
    try {
        Selection sel = select_parameters(regime, alpha, in, consts);
        nlohmann::json j;
        j["regime"] = regime_name(sel.regime);
        j["alpha"] = sel.alpha;
        j["delta1"] = sel.delta1;
        j["delta2"] = sel.delta2;
        j["kappa"] = sel.kappa;
        j["mu"] = sel.mu;
        j["log_lambda"] = sel.log_lambda;
        j["lambda"] = std::exp(sel.log_lambda);
        j["log_Xi1"] = sel.pair.log_Xi1;
        j["log_Xi2"] = sel.pair.log_Xi2;
        for (const auto& c : sel.checks)
            j["checks"].push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok}});
        std::cout << j.dump(2) << "\n";
        return 0;
    } catch (const InfeasibleSelection& e) {
        nlohmann::json j;
        j["infeasible"] = true;
        j["binding_inequality"] = e.binding_inequality();
        j["detail"] = e.what();
        std::cout << j.dump(2) << "\n";
        return 3;
    }
}

int cmd_report(const std::string& run_dir) {
    RunArtifacts art = load_run(run_dir);
    report(art);
    std::printf("report regenerated in %s (status: %s)\n", run_dir.c_str(), art.status.c_str());
    return art.status == "completed" ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"uni-directional Euler-alignment simulator and MOC toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run a scenario from a config file");
    run_cmd->add_option("config", config_path, "config file")->required();

    double alpha = 1.0;
    int dim = 1, n_xi = 40;
    std::string sweep_path, out_dir = "lemma_out";
    auto* verify_cmd = app.add_subcommand("verify-lemmas", "quadrature-vs-bound sweeps");
    verify_cmd->add_option("--alpha", alpha, "dissipation order")->required();
    verify_cmd->add_option("--dim", dim, "spatial dimension")->default_val(1);
    verify_cmd->add_option("--sweep", sweep_path, "CSV of delta2,kappa,mu,lambda,V0,rhoF0 rows");
    verify_cmd->add_option("--out", out_dir, "output directory");
    verify_cmd->add_option("--n-xi", n_xi, "xi points per sweep");

    std::string regime;
    SelectionInputs sel_in;
    double sel_sigma = 0.0, sel_ucs = -1.0;
    auto* select_cmd = app.add_subcommand("select-params", "MOC parameter selection");
    select_cmd->add_option("regime", regime, "subcritical|critical|supercritical")->required();
    select_cmd->add_option("--alpha", alpha, "dissipation order")->required();
    select_cmd->add_option("--dim", dim, "spatial dimension")->default_val(1);
    select_cmd->add_option("--rho-lower", sel_in.rho_lower)->required();
    select_cmd->add_option("--rho-upper", sel_in.rho_upper)->required();
    select_cmd->add_option("--v0", sel_in.V0)->required();
    select_cmd->add_option("--f0", sel_in.F0_norm)->required();
    select_cmd->add_option("--gradf0", sel_in.gradF0_norm)->default_val(0.0);
    select_cmd->add_option("--h0", sel_in.H0_norm)->default_val(0.0);
    select_cmd->add_option("--c0", sel_in.c0)->default_val(0.1);
    select_cmd->add_option("--sigma", sel_sigma, "supercritical Hoelder exponent");
    select_cmd->add_option("--u-csigma", sel_ucs, "supercritical |u|_{C^sigma} bound");

    std::string run_dir;
    auto* report_cmd = app.add_subcommand("report", "regenerate reports from a run directory");
    report_cmd->add_option("run_dir", run_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(config_path);
        if (*verify_cmd) return cmd_verify_lemmas(alpha, dim, sweep_path, out_dir, n_xi);
        if (*select_cmd) {
            if (sel_sigma > 0.0) sel_in.sigma = sel_sigma;
            if (sel_ucs >= 0.0) sel_in.u_Csigma = sel_ucs;
            return cmd_select_params(regime, alpha, dim, sel_in);
        }
        if (*report_cmd) return cmd_report(run_dir);
    } catch (const NumericalEvent& e) {
        std::fprintf(stderr, "numerical event [%s] at t=%.6g: %s\n",
                     NumericalEvent::name(e.kind()), e.t(), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
