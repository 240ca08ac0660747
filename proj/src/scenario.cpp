#include "ualign/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ualign/counter_rng.hpp"
#include "ualign/field_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ualign {

const char* scenario_name(Scenario s) {
    switch (s) {
        case Scenario::Generic: return "generic";
        case Scenario::GZero: return "g_zero";
        case Scenario::FrozenBurgers: return "frozen_burgers";
        case Scenario::ShearFlock: return "shear_flock";
        case Scenario::CriticalDemo: return "critical_demo";
        case Scenario::SupercriticalCriterion: return "supercritical_criterion";
    }
    return "unknown";
}

Scenario scenario_from_name(const std::string& name) {
    for (Scenario s : {Scenario::Generic, Scenario::GZero, Scenario::FrozenBurgers,
                       Scenario::ShearFlock, Scenario::CriticalDemo,
                       Scenario::SupercriticalCriterion})
        if (name == scenario_name(s)) return s;
    throw std::invalid_argument("unknown scenario '" + name + "'");
}

void ScenarioConfig::validate() const {
    solver.validate();
    if (dim < 1 || dim > 2) throw std::invalid_argument("config: dim must be 1 or 2");
    if (initial.rho_mean <= 0.0) throw std::invalid_argument("config: rho_mean must be positive");
    if (initial.k_max < 1 || 3 * initial.k_max > n)
        throw std::invalid_argument("config: k_max must be in [1, n/3]");
    switch (scenario) {
        case Scenario::ShearFlock:
            if (dim != 2) throw std::invalid_argument("shear_flock requires dim = 2");
            break;
        case Scenario::CriticalDemo:
            if (solver.alpha != 1.0) throw std::invalid_argument("critical_demo requires alpha = 1");
            break;
        case Scenario::SupercriticalCriterion:
            if (!(solver.alpha > 0.0 && solver.alpha < 1.0))
                throw std::invalid_argument("supercritical_criterion requires alpha in (0,1)");
            if (!(sigma > 1.0 - solver.alpha && sigma < 1.0))
                throw std::invalid_argument("supercritical_criterion requires sigma in (1-alpha,1)");
            break;
        case Scenario::FrozenBurgers:
            if (!solver.frozen_density)
                throw std::invalid_argument("frozen_burgers requires frozen_density = true");
            break;
        default: break;
    }
}

namespace {

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("config: bad boolean for " + key + ": '" + v + "'");
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

} // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw std::invalid_argument("config: bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        std::string qual = section + "." + key;

        if (qual == "scenario.name") cfg.scenario = scenario_from_name(val);
        else if (qual == "scenario.seed") cfg.seed = std::stoull(val);
        else if (qual == "scenario.output_dir") cfg.output_dir = val;
        else if (qual == "grid.dim") cfg.dim = std::stoi(val);
        else if (qual == "grid.n") cfg.n = std::stoi(val);
        else if (qual == "grid.length") cfg.length = std::stod(val);
        else if (qual == "solver.alpha") cfg.solver.alpha = std::stod(val);
        else if (qual == "solver.scheme") {
            if (val == "rk4") cfg.solver.scheme = TimeScheme::ExplicitRK4;
            else if (val == "imex_cn") cfg.solver.scheme = TimeScheme::ImexCN;
            else throw std::invalid_argument("config: unknown scheme '" + val + "'");
        }
        else if (qual == "solver.cfl") cfg.solver.cfl = std::stod(val);
        else if (qual == "solver.dealias") cfg.solver.dealias = parse_bool(val, qual);
        else if (qual == "solver.frozen_density") cfg.solver.frozen_density = parse_bool(val, qual);
        else if (qual == "solver.t_end") cfg.solver.t_end = std::stod(val);
        else if (qual == "solver.output_stride") cfg.solver.output_stride = std::stoi(val);
        else if (qual == "solver.blowup_gradient_threshold")
            cfg.solver.blowup_gradient_threshold = std::stod(val);
        else if (qual == "initial.rho_mean") cfg.initial.rho_mean = std::stod(val);
        else if (qual == "initial.rho_amplitude") cfg.initial.rho_amplitude = std::stod(val);
        else if (qual == "initial.u_mean") cfg.initial.u_mean = std::stod(val);
        else if (qual == "initial.u_amplitude") cfg.initial.u_amplitude = std::stod(val);
        else if (qual == "initial.k_max") cfg.initial.k_max = std::stoi(val);
        else if (qual == "moc.enabled") cfg.moc.enabled = parse_bool(val, qual);
        else if (qual == "moc.rho_headroom") cfg.moc.rho_headroom = std::stod(val);
        else if (qual == "moc.v0_headroom") cfg.moc.v0_headroom = std::stod(val);
        else if (qual == "moc.c0_guess") cfg.moc.c0_guess = std::stod(val);
        else if (qual == "criterion.sigma") cfg.sigma = std::stod(val);
        else throw std::invalid_argument("config: unknown key '" + qual + "'");
    }
    if (cfg.scenario == Scenario::FrozenBurgers) cfg.solver.frozen_density = true;
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ScenarioConfig& cfg) {
    json j;
    j["scenario"]["name"] = scenario_name(cfg.scenario);
    j["scenario"]["seed"] = cfg.seed;
    j["scenario"]["output_dir"] = cfg.output_dir;
    j["grid"]["dim"] = cfg.dim;
    j["grid"]["n"] = cfg.n;
    j["grid"]["length"] = cfg.length;
    j["solver"]["alpha"] = cfg.solver.alpha;
    j["solver"]["scheme"] = cfg.solver.scheme == TimeScheme::ExplicitRK4 ? "rk4" : "imex_cn";
    j["solver"]["cfl"] = cfg.solver.cfl;
    j["solver"]["dealias"] = cfg.solver.dealias;
    j["solver"]["frozen_density"] = cfg.solver.frozen_density;
    j["solver"]["t_end"] = cfg.solver.t_end;
    j["solver"]["output_stride"] = cfg.solver.output_stride;
    j["solver"]["blowup_gradient_threshold"] = cfg.solver.blowup_gradient_threshold;
    j["initial"]["rho_mean"] = cfg.initial.rho_mean;
    j["initial"]["rho_amplitude"] = cfg.initial.rho_amplitude;
    j["initial"]["u_mean"] = cfg.initial.u_mean;
    j["initial"]["u_amplitude"] = cfg.initial.u_amplitude;
    j["initial"]["k_max"] = cfg.initial.k_max;
    j["moc"]["enabled"] = cfg.moc.enabled;
    j["moc"]["rho_headroom"] = cfg.moc.rho_headroom;
    j["moc"]["v0_headroom"] = cfg.moc.v0_headroom;
    j["moc"]["c0_guess"] = cfg.moc.c0_guess;
    j["criterion"]["sigma"] = cfg.sigma;
    return j.dump(2);
}

namespace {

struct ModeSpec {
    std::array<int, 2> k;
    double weight;
};

// Integer modes 1 <= |k| <= k_max, fixed deterministic order, with one
// representative per conjugate pair.
std::vector<ModeSpec> mode_set(int dim, int k_max, bool require_k1) {
    std::vector<ModeSpec> modes;
    if (dim == 1) {
        for (int k = 1; k <= k_max; ++k) modes.push_back({{k, 0}, std::pow(2.0, -double(k))});
        return modes;
    }
    for (int k1 = 0; k1 <= k_max; ++k1) {
        for (int k2 = -k_max; k2 <= k_max; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;
            double knorm = std::sqrt(double(k1) * k1 + double(k2) * k2);
            if (knorm > k_max + 1e-12) continue;
            if (require_k1 && k1 == 0) continue;
            modes.push_back({{k1, k2}, std::pow(2.0, -knorm)});
        }
    }
    return modes;
}

ScalarField trig_sum(GridPtr grid, double mean, double amplitude,
                     const std::vector<ModeSpec>& modes, CounterRng& rng) {
    double wsum = 0.0;
    for (const auto& m : modes) wsum += m.weight;
    std::vector<double> phases(modes.size());
    for (auto& p : phases) p = 2.0 * M_PI * rng.next_double();

    const TorusGrid& g = *grid;
    std::vector<double> v(g.size(), mean);
    const double scale = 2.0 * M_PI / g.length();
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto idx = g.unflatten(i);
        double x1 = g.node(idx[0]) * scale * 1.0;
        double x2 = g.dim() > 1 ? g.node(idx[1]) * scale : 0.0;
        double acc = 0.0;
        for (std::size_t m = 0; m < modes.size(); ++m) {
            double phase = modes[m].k[0] * x1 + modes[m].k[1] * x2 + phases[m];
            acc += (modes[m].weight / wsum) * std::cos(phase);
        }
        v[i] += amplitude * acc;
    }
    return ScalarField(grid, std::move(v));
}

} // namespace

FlowState build_initial_data(const ScenarioConfig& cfg, GridPtr grid) {
    CounterRng rng(cfg.seed);
    const auto& p = cfg.initial;

    if (p.rho_amplitude > 0.9 * p.rho_mean && cfg.scenario != Scenario::FrozenBurgers)
        throw std::invalid_argument(
            "initial data: rho_amplitude leaves min(rho0) < 0.1*rho_mean; reduce the amplitude");

    ScalarField rho = ScalarField::constant(grid, p.rho_mean);
    ScalarField u = ScalarField::constant(grid, p.u_mean);

    switch (cfg.scenario) {
        case Scenario::Generic:
        case Scenario::CriticalDemo:
        case Scenario::SupercriticalCriterion: {
            auto modes = mode_set(cfg.dim, p.k_max, false);
            rho = trig_sum(grid, p.rho_mean, p.rho_amplitude, modes, rng);
            u = trig_sum(grid, p.u_mean, p.u_amplitude, modes, rng);
            break;
        }
        case Scenario::GZero: {
            auto modes = mode_set(cfg.dim, p.k_max, true);
            rho = trig_sum(grid, p.rho_mean, p.rho_amplitude, modes, rng);
            u = inv_dx1_lambda(rho, cfg.solver.alpha).to_physical();
            break;
        }
        case Scenario::FrozenBurgers: {
            auto modes = mode_set(cfg.dim, p.k_max, false);
            rho = ScalarField::constant(grid, 1.0);
            u = trig_sum(grid, p.u_mean, p.u_amplitude, modes, rng);
            break;
        }
        case Scenario::ShearFlock: {
            std::vector<ModeSpec> modes;
            for (int k2 = 1; k2 <= p.k_max; ++k2)
                modes.push_back({{0, k2}, std::pow(2.0, -double(k2))});
            rho = trig_sum(grid, p.rho_mean, p.rho_amplitude, modes, rng);
            u = trig_sum(grid, p.u_mean, p.u_amplitude, modes, rng);
            break;
        }
    }

    if (cfg.solver.dealias) {
        rho = dealias(rho).to_physical();
        u = dealias(u).to_physical();
    }
    if (rho.min() < 0.1 * p.rho_mean && cfg.scenario != Scenario::FrozenBurgers)
        throw std::invalid_argument(
            "initial data: generated rho0 dips below 0.1*rho_mean; reduce the amplitude");
    return FlowState(std::move(rho), std::move(u), 0.0);
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

json selection_to_json(const Selection& sel) {
    json j;
    j["regime"] = regime_name(sel.regime);
    j["alpha"] = sel.alpha;
    j["delta1"] = sel.delta1;
    j["delta2"] = sel.delta2;
    j["kappa"] = sel.kappa;
    j["mu"] = sel.mu;
    j["log_lambda"] = sel.log_lambda;
    j["c0"] = sel.pair.c0;
    j["log_Xi1"] = sel.pair.log_Xi1;
    j["log_Xi2"] = sel.pair.log_Xi2;
    for (const auto& c : sel.checks)
        j["checks"].push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok}});
    return j;
}

std::string snapshot_name(const char* field, int index) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s_%06d.fld", field, index);
    return buf;
}

Selection selection_from_json(const json& j) {
    std::string rn = j.at("regime").get<std::string>();
    Regime regime = rn == "subcritical" ? Regime::Subcritical
                    : rn == "critical" ? Regime::Critical
                                       : Regime::Supercritical;
    double delta1 = j.at("delta1").get<double>();
    double delta2 = j.at("delta2").get<double>();
    double mu = j.at("mu").get<double>();
    double L = j.at("log_lambda").get<double>();
    MocPair pair = MocPair::from_logs(Moc::from_log_lambda(delta1, mu, L),
                                      Moc::from_log_lambda(delta2, mu, L),
                                      j.at("kappa").get<double>(), j.at("c0").get<double>(),
                                      j.at("log_Xi1").get<double>(), j.at("log_Xi2").get<double>());
    Selection sel{regime, j.at("alpha").get<double>(), delta1, delta2,
                  j.at("kappa").get<double>(), mu, L, std::move(pair), {}};
    if (j.contains("checks"))
        for (const auto& c : j.at("checks"))
            sel.checks.push_back({c.at("name").get<std::string>(), c.at("lhs").get<double>(),
                                  c.at("rhs").get<double>(), c.at("ok").get<bool>()});
    return sel;
}

} // namespace

RunArtifacts run(const ScenarioConfig& cfg) {
    cfg.validate();
    RunArtifacts art;
    art.cfg = cfg;
    art.output_dir = cfg.output_dir;

    fs::create_directories(cfg.output_dir);
    fs::create_directories(fs::path(cfg.output_dir) / "snapshots");
    std::ofstream events(fs::path(cfg.output_dir) / "events.jsonl");
    if (!events) throw std::runtime_error("cannot write events log in " + cfg.output_dir);

    auto grid = make_grid(cfg.dim, cfg.n, cfg.length);
    FlowState state = build_initial_data(cfg, grid);
    ShiftSet shifts(*grid);

    std::optional<EmpiricalConstants> consts;
    SelectionInputs sel_inputs;
    if (cfg.moc.enabled) {
        const double alpha = cfg.solver.alpha;
        consts = fit_empirical_constants(alpha, cfg.dim, default_sweep(alpha));
        AuxiliaryFields aux0 = extract_auxiliary(state, alpha);
        sel_inputs.rho_lower = state.rho.min() / cfg.moc.rho_headroom;
        sel_inputs.rho_upper = state.rho.max() * cfg.moc.rho_headroom;
        sel_inputs.V0 = std::max((state.u.max() - state.u.min()) * cfg.moc.v0_headroom, 1e-6);
        sel_inputs.F0_norm = aux0.F.sup_norm();
        sel_inputs.gradF0_norm = gradient_norm(aux0.F).max();
        sel_inputs.H0_norm = aux0.H.sup_norm();
        sel_inputs.c0 = cfg.moc.c0_guess;
        Regime regime = alpha > 1.0 ? Regime::Subcritical
                        : alpha == 1.0 ? Regime::Critical
                                       : Regime::Supercritical;
        if (regime == Regime::Supercritical) {
            sel_inputs.sigma = cfg.sigma;
            sel_inputs.u_Csigma =
                2.0 * (state.u.sup_norm() + holder_seminorm(state.u, cfg.sigma, shifts));
        }
        Selection sel = select_parameters(regime, alpha, sel_inputs, *consts);
        // shrink lambda to the data-admissibility bound (still closes every
        // inequality: all lambda terms shrink with lambda)
        double L_data = std::min(log_admissible_lambda(state.rho, sel.delta1),
                                 log_admissible_lambda(state.u, sel.delta2));
        if (L_data < sel.log_lambda) {
            sel.log_lambda = L_data;
            sel.pair = MocPair(Moc::from_log_lambda(sel.delta1, sel.mu, L_data),
                               Moc::from_log_lambda(sel.delta2, sel.mu, L_data), sel.kappa,
                               sel.pair.c0, sel_inputs.rho_upper, sel_inputs.V0);
            sel.checks = verify_selection(regime, alpha, sel_inputs, *consts, sel.delta1,
                                          sel.delta2, sel.mu, sel.log_lambda);
        }
        art.moc_selection = std::move(sel);
    }

    auto log_event = [&](const char* kind, double t, const std::string& detail) {
        json e{{"t", t}, {"kind", kind}, {"detail", detail}};
        events << e.dump() << "\n";
        events.flush();
        art.event_time = t;
        art.event_detail = detail;
    };

    const MocPair* pair = art.moc_selection ? &art.moc_selection->pair : nullptr;
    int snap_index = 0;
    auto emit = [&](const FlowState& s) {
        AuxiliaryFields aux = extract_auxiliary(s, cfg.solver.alpha);
        DiagnosticsRecord rec = record(s, aux, pair, cfg.sigma, shifts);
        // operational blow-up criterion on the gradients
        bool blown = rec.lip_rho + rec.lip_u > cfg.solver.blowup_gradient_threshold;
        bool touched = pair && (rec.moc_margin_rho <= 0.0 || rec.moc_margin_u <= 0.0);
        char detail[96] = {0};
        if (blown) {
            std::snprintf(detail, sizeof detail,
                          "|grad rho|+|grad u| = %.6g exceeded the blow-up threshold",
                          rec.lip_rho + rec.lip_u);
            rec.events.push_back("blowup");
        } else if (touched) {
            std::snprintf(detail, sizeof detail, "%s MOC touched at t=%.6g",
                          rec.moc_margin_rho <= 0.0 ? "rho" : "u", s.t);
            rec.events.push_back("moc_breakthrough");
        }
        art.records.push_back(std::move(rec));
        art.snapshots.push_back(s);
        write_field(s.rho, (fs::path(cfg.output_dir) / "snapshots" / snapshot_name("rho", snap_index)).string());
        write_field(s.u, (fs::path(cfg.output_dir) / "snapshots" / snapshot_name("u", snap_index)).string());
        ++snap_index;
        if (blown) throw NumericalEvent(NumericalEvent::Kind::Blowup, s.t, detail);
        if (touched) throw NumericalEvent(NumericalEvent::Kind::MocBreakthrough, s.t, detail);
    };

    int step_idx = 0;
    bool emitted_last = true;
    try {
        emit(state);
        while (state.t < cfg.solver.t_end - 1e-12) {
            double dt = stable_dt(state, cfg.solver);
            if (state.t + dt > cfg.solver.t_end) dt = cfg.solver.t_end - state.t;
            state = step(state, cfg.solver, dt);
            ++step_idx;
            emitted_last = false;
            if (step_idx % cfg.solver.output_stride == 0 ||
                state.t >= cfg.solver.t_end - 1e-12) {
                emit(state);
                emitted_last = true;
            }
        }
        if (!emitted_last) emit(state);
    } catch (const NumericalEvent& e) {
        art.status = NumericalEvent::name(e.kind());
        log_event(NumericalEvent::name(e.kind()), e.t(), e.what());
    }

    // post-hoc analysis
    if (art.snapshots.size() >= 3) {
        art.flocking = fit_flocking(art.records, art.snapshots);
        if (pair && art.flocking->status == "fitted" && art.flocking->decay_rate_fit > 0.0) {
            // rescan the u margins against exp(-c0hat t) omega2 with the
            // fitted rate, and close the selector loop with it
            MocPair refit = art.moc_selection->pair;
            refit.c0 = art.flocking->decay_rate_fit;
            for (std::size_t i = 0; i < art.snapshots.size(); ++i) {
                const FlowState& s = art.snapshots[i];
                double decay = std::exp(-refit.c0 * s.t);
                art.records[i].moc_margin_u =
                    scan_breakthrough(s.u, refit.omega2, decay, shifts).margin;
            }
            art.moc_selection->pair.c0 = refit.c0;
            SelectionInputs posthoc = sel_inputs;
            posthoc.c0 = refit.c0;
            art.posthoc_checks = verify_selection(
                art.moc_selection->regime, cfg.solver.alpha, posthoc, *consts,
                art.moc_selection->delta1, art.moc_selection->delta2, art.moc_selection->mu,
                art.moc_selection->log_lambda);
        }
    }
    if (!art.records.empty())
        art.violations = check_apriori(
            std::vector<DiagnosticsRecord>(art.records.begin() + 1, art.records.end()),
            art.records.front());

    // persist
    json manifest;
    manifest["config"] = json::parse(config_to_json(cfg));
    manifest["status"] = art.status;
    manifest["event_time"] = art.event_time;
    manifest["event_detail"] = art.event_detail;
    manifest["n_snapshots"] = snap_index;
    if (art.moc_selection) manifest["selection"] = selection_to_json(*art.moc_selection);
    if (consts) {
        manifest["constants"] = {{"C1", consts->C1}, {"C2", consts->C2}, {"C3", consts->C3},
                                 {"C4", consts->C4}, {"C4t", consts->C4t}, {"C0", consts->C0},
                                 {"provenance", consts->provenance}};
    }
    write_text(fs::path(cfg.output_dir) / "manifest.json", manifest.dump(2) + "\n");
    write_text(fs::path(cfg.output_dir) / "diagnostics.csv", diagnostics_csv(art.records));
    report(art);
    return art;
}

void report(const RunArtifacts& art) {
    json j;
    j["status"] = art.status;
    j["event_time"] = art.event_time;
    j["event_detail"] = art.event_detail;
    j["records"] = art.records.size();
    if (!art.records.empty()) {
        j["final"]["t"] = art.records.back().t;
        j["final"]["lip_rho"] = art.records.back().lip_rho;
        j["final"]["lip_u"] = art.records.back().lip_u;
    }
    if (art.flocking) {
        j["flocking"]["status"] = art.flocking->status;
        j["flocking"]["u_bar"] = art.flocking->u_bar;
        j["flocking"]["decay_rate_fit"] = art.flocking->decay_rate_fit;
        j["flocking"]["r_squared"] = art.flocking->r_squared;
        j["flocking"]["beta"] = art.flocking->beta;
    }
    for (const auto& v : art.violations)
        j["violations"].push_back({{"name", v.name}, {"t", v.t}, {"detail", v.detail}});
    if (art.violations.empty()) j["violations"] = json::array();
    if (art.moc_selection) {
        j["selection"] = selection_to_json(*art.moc_selection);
        double worst_rho = std::numeric_limits<double>::infinity();
        double worst_u = std::numeric_limits<double>::infinity();
        for (const auto& r : art.records) {
            worst_rho = std::min(worst_rho, r.moc_margin_rho);
            worst_u = std::min(worst_u, r.moc_margin_u);
        }
        j["moc"]["worst_margin_rho"] = worst_rho;
        j["moc"]["worst_margin_u"] = worst_u;
        for (const auto& c : art.posthoc_checks)
            j["moc"]["posthoc_checks"].push_back(
                {{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok}});
    }
    write_text(fs::path(art.output_dir) / "report.json", j.dump(2) + "\n");

    std::string flock_csv = "t,V,u_dev_sup,profile_residual\n";
    char buf[256];
    if (art.flocking) {
        for (std::size_t i = 0; i < art.flocking->times.size(); ++i) {
            double V = i < art.records.size() ? art.records[i].V
                                              : std::numeric_limits<double>::quiet_NaN();
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", art.flocking->times[i], V,
                          art.flocking->u_dev_sup[i], art.flocking->profile_residual[i]);
            flock_csv += buf;
        }
    }
    write_text(fs::path(art.output_dir) / "flocking.csv", flock_csv);

    std::string moc_csv = "t,moc_margin_rho,moc_margin_u\n";
    for (const auto& r : art.records) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.t, r.moc_margin_rho,
                      r.moc_margin_u);
        moc_csv += buf;
    }
    write_text(fs::path(art.output_dir) / "moc_margins.csv", moc_csv);
}

RunArtifacts load_run(const std::string& run_dir) {
    fs::path dir(run_dir);
    std::vector<std::string> missing;
    for (const char* req : {"manifest.json", "diagnostics.csv"})
        if (!fs::exists(dir / req)) missing.push_back(req);
    if (!fs::exists(dir / "snapshots") || fs::is_empty(dir / "snapshots"))
        missing.push_back("snapshots/");
    if (!missing.empty()) {
        std::string msg = "run directory " + run_dir + " is missing:";
        for (const auto& m : missing) msg += " " + m;
        throw std::runtime_error(msg);
    }

    std::ifstream mf(dir / "manifest.json");
    json manifest = json::parse(mf);
    RunArtifacts art;
    art.cfg = parse_config(""); // defaults; echoed values below
    art.cfg.output_dir = run_dir;
    art.output_dir = run_dir;
    art.status = manifest.at("status").get<std::string>();
    art.event_time = manifest.value("event_time", 0.0);
    art.event_detail = manifest.value("event_detail", "");

    std::ifstream dc(dir / "diagnostics.csv");
    std::stringstream ss;
    ss << dc.rdbuf();
    art.records = parse_diagnostics_csv(ss.str());
    if (manifest.contains("selection"))
        art.moc_selection = selection_from_json(manifest.at("selection"));

    int n_snap = manifest.value("n_snapshots", 0);
    for (int i = 0; i < n_snap; ++i) {
        fs::path rp = dir / "snapshots" / snapshot_name("rho", i);
        fs::path up = dir / "snapshots" / snapshot_name("u", i);
        if (!fs::exists(rp) || !fs::exists(up))
            throw std::runtime_error("run directory is missing snapshot pair index " +
                                     std::to_string(i));
        ScalarField rho = read_field(rp.string());
        ScalarField u = read_field(up.string());
        double t = rho.time();
        art.snapshots.emplace_back(std::move(rho), std::move(u), t);
    }
    if (art.snapshots.size() >= 3)
        art.flocking = fit_flocking(art.records, art.snapshots);
    if (!art.records.empty())
        art.violations = check_apriori(
            std::vector<DiagnosticsRecord>(art.records.begin() + 1, art.records.end()),
            art.records.front());
    return art;
}

} // namespace ualign
