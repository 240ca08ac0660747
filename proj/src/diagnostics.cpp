#include "ualign/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace ualign {

DiagnosticsRecord record(const FlowState& state, const AuxiliaryFields& aux,
                         const MocPair* pair, double sigma, const ShiftSet& shifts) {
    DiagnosticsRecord r;
    r.t = state.t;
    r.mass = state.rho.integral();
    r.momentum = (state.rho * state.u).integral();
    r.rho_min = state.rho.refined_min();
    r.rho_max = state.rho.refined_max();
    r.F_sup = aux.F.refined_sup();
    r.G_sup = aux.G.refined_sup();
    r.V = state.u.refined_max() - state.u.refined_min();
    r.lip_rho = gradient_norm(state.rho).max();
    r.lip_u = gradient_norm(state.u).max();
    r.holder_u_sigma = holder_seminorm(state.u, sigma, shifts);
    if (pair) {
        ScanResult rho_scan = scan_breakthrough(state.rho, pair->omega1, 1.0, shifts);
        double decay = std::exp(-pair->c0 * state.t);
        ScanResult u_scan = scan_breakthrough(state.u, pair->omega2, decay, shifts);
        r.moc_margin_rho = rho_scan.margin;
        r.moc_margin_u = u_scan.margin;
    }
    return r;
}

std::vector<Violation> check_apriori(const std::vector<DiagnosticsRecord>& series,
                                     const DiagnosticsRecord& initial) {
    std::vector<Violation> out;
    if (series.empty()) return out;

    const double mass_tol = 1e-9, mom_tol = 1e-7, slack = 1e-6;
    const double mass_scale = std::abs(initial.mass);
    double mom_scale = std::abs(initial.momentum);
    if (mom_scale < 1e-12 * mass_scale) mom_scale = mass_scale; // fall back on the mass scale

    // density floor over the first time unit
    double early_floor = initial.rho_min;
    for (const auto& r : series)
        if (r.t <= 1.0) early_floor = std::min(early_floor, r.rho_min);

    double running_rho_max = initial.rho_max;
    const DiagnosticsRecord* prev = &initial;
    char buf[160];
    for (const auto& r : series) {
        running_rho_max = std::max(running_rho_max, r.rho_max);
        double horizon = std::max(r.t, 0.25); // drift budget per unit time
        if (std::abs(r.mass - initial.mass) > mass_tol * horizon * mass_scale) {
            std::snprintf(buf, sizeof buf, "relative mass drift %.3e at t=%.4g",
                          std::abs(r.mass - initial.mass) / mass_scale, r.t);
            out.push_back({"mass", r.t, buf});
        }
        if (std::abs(r.momentum - initial.momentum) > mom_tol * horizon * mom_scale) {
            std::snprintf(buf, sizeof buf, "relative momentum drift %.3e at t=%.4g",
                          std::abs(r.momentum - initial.momentum) / mom_scale, r.t);
            out.push_back({"momentum", r.t, buf});
        }
        double f_cap = initial.F_sup * (1.0 + slack) + 1e-10 * std::max(1.0, initial.F_sup);
        if (r.F_sup > f_cap) {
            std::snprintf(buf, sizeof buf, "sup|F|=%.6g exceeds sup|F0|=%.6g at t=%.4g", r.F_sup,
                          initial.F_sup, r.t);
            out.push_back({"F_transport", r.t, buf});
        }
        double g_cap = running_rho_max * initial.F_sup * (1.0 + slack) +
                       1e-10 * std::max(1.0, initial.F_sup);
        if (r.G_sup > g_cap) {
            std::snprintf(buf, sizeof buf, "sup|G|=%.6g exceeds rho_max*sup|F0|=%.6g at t=%.4g",
                          r.G_sup, g_cap, r.t);
            out.push_back({"G_bound", r.t, buf});
        }
        if (r.V > prev->V + 1e-8) {
            std::snprintf(buf, sizeof buf, "V grew from %.9g to %.9g at t=%.4g", prev->V, r.V, r.t);
            out.push_back({"V_monotone", r.t, buf});
        }
        if (r.rho_min < 0.5 * early_floor) {
            std::snprintf(buf, sizeof buf, "rho_min=%.6g below half the early floor %.6g at t=%.4g",
                          r.rho_min, early_floor, r.t);
            out.push_back({"rho_floor", r.t, buf});
        }
        prev = &r;
    }
    return out;
}

namespace {

struct LineFit {
    double slope = 0.0;
    double r_squared = 0.0;
    bool ok = false;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    std::size_t n = x.size();
    if (n < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    double det = n * sxx - sx * sx;
    if (det == 0.0) return f;
    f.slope = (n * sxy - sx * sy) / det;
    double ss_tot = syy - sy * sy / n;
    double intercept = (sy - f.slope * sx) / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (intercept + f.slope * x[i]);
        ss_res += e * e;
    }
    f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    f.ok = true;
    return f;
}

double holder_norm(const ScalarField& f, double beta, const ShiftSet& shifts) {
    return f.sup_norm() + holder_seminorm(f, beta, shifts);
}

} // namespace

FlockReport fit_flocking(const std::vector<DiagnosticsRecord>& series,
                         const std::vector<FlowState>& snapshots, double beta) {
    FlockReport rep;
    rep.beta = beta;
    rep.status = "inconclusive";
    if (snapshots.size() < 3 || series.empty()) return rep;

    const double mass0 = snapshots.front().rho.integral();
    const double mom0 = (snapshots.front().rho * snapshots.front().u).integral();
    rep.u_bar = mom0 / mass0;

    ShiftSet shifts(snapshots.front().rho.grid());
    // rho in the co-moving frame; the last snapshot stands in for the
    // terminal profile
    std::vector<ScalarField> shifted;
    shifted.reserve(snapshots.size());
    for (const auto& s : snapshots) {
        std::array<double, 3> a{rep.u_bar * s.t, 0.0, 0.0};
        shifted.push_back(translate(s.rho, a).to_physical());
    }
    ScalarField ubar_field = ScalarField::constant(snapshots.front().rho.grid_ptr(), rep.u_bar);
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        const auto& s = snapshots[i];
        rep.times.push_back(s.t);
        rep.u_dev_sup.push_back((s.u - ubar_field).refined_sup());
        rep.profile_residual.push_back(holder_norm(shifted[i] - shifted.back(), beta, shifts));
    }

    // need >= 3 e-foldings of V decay for a meaningful rate
    double v_first = series.front().V;
    double v_last = series.back().V;
    if (!(v_first > 0.0) || !(v_last > 0.0) || v_first < std::exp(3.0) * v_last) return rep;

    std::vector<double> xs, ys;
    for (std::size_t i = snapshots.size() / 2; i < snapshots.size(); ++i) {
        if (rep.u_dev_sup[i] <= 0.0) continue;
        xs.push_back(rep.times[i]);
        ys.push_back(std::log(rep.u_dev_sup[i]));
    }
    LineFit f = fit_line(xs, ys);
    if (!f.ok) return rep;
    rep.decay_rate_fit = -f.slope;
    rep.r_squared = f.r_squared;
    rep.status = "fitted";
    return rep;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& series) {
    std::string csv =
        "t,mass,momentum,rho_min,rho_max,F_sup,G_sup,V,lip_rho,lip_u,holder_u_sigma,"
        "moc_margin_rho,moc_margin_u,events\n";
    char buf[512];
    for (const auto& r : series) {
        std::string ev;
        for (const auto& e : r.events) {
            if (!ev.empty()) ev += ';';
            ev += e;
        }
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                      r.t, r.mass, r.momentum, r.rho_min, r.rho_max, r.F_sup, r.G_sup, r.V,
                      r.lip_rho, r.lip_u, r.holder_u_sigma, r.moc_margin_rho, r.moc_margin_u,
                      ev.c_str());
        csv += buf;
    }
    return csv;
}

std::vector<DiagnosticsRecord> parse_diagnostics_csv(const std::string& csv) {
    std::vector<DiagnosticsRecord> out;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        DiagnosticsRecord r;
        std::istringstream ls(line);
        std::string cell;
        double* fields[13] = {&r.t, &r.mass, &r.momentum, &r.rho_min, &r.rho_max,
                              &r.F_sup, &r.G_sup, &r.V, &r.lip_rho, &r.lip_u,
                              &r.holder_u_sigma, &r.moc_margin_rho, &r.moc_margin_u};
        for (double* f : fields) {
            if (!std::getline(ls, cell, ',')) throw std::runtime_error("diagnostics csv: short row");
            *f = std::strtod(cell.c_str(), nullptr);
        }
        if (std::getline(ls, cell, ',') && !cell.empty()) {
            std::istringstream es(cell);
            std::string e;
            while (std::getline(es, e, ';')) r.events.push_back(e);
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace ualign
