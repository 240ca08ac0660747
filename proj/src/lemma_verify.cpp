#include "ualign/lemma_verify.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace ualign {

const char* lemma_name(LemmaId id) {
    switch (id) {
        case LemmaId::DissipationLower: return "dissipation_lower";
        case LemmaId::AUpper: return "riesz_diff_upper";
        case LemmaId::KUpper: return "cross_term_upper";
        case LemmaId::KSubcUpper: return "cross_term_refined_upper";
        case LemmaId::RieszMoc: return "riesz_moc_bracket";
    }
    return "unknown";
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0.0 && hi > lo) || n < 2) throw std::invalid_argument("log_spaced: bad range");
    std::vector<double> out(static_cast<std::size_t>(n));
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (n - 1));
    return out;
}

std::pair<double, double> lemma_xi_range(LemmaId id, const LemmaParams& p) {
    double Xi2 = p.lambda * std::exp(2.0 * p.V0 / p.delta2 - 1.5);
    double Xi1 = p.lambda * std::exp(2.0 * p.rho_bar / p.delta1() - 1.5);
    switch (id) {
        case LemmaId::DissipationLower:
        case LemmaId::AUpper:
            return {1e-3 * p.lambda, std::max({Xi1, Xi2, 2.0 * p.lambda})};
        case LemmaId::KUpper:
            return {1e-3 * p.lambda, std::max(Xi2, 1e-2 * p.lambda)};
        case LemmaId::KSubcUpper:
            // stated for lambda < xi <= Xi2 only; may be empty
            return {1.05 * p.lambda, Xi2};
        case LemmaId::RieszMoc:
            // holds for every xi > lambda; Xi2 only caps the scan need
            return {1.05 * p.lambda, std::max(Xi2, p.lambda * std::exp(2.0))};
    }
    return {1e-3 * p.lambda, Xi2};
}

double shape_D(double xi, const LemmaParams& p, double alpha) {
    double delta = p.delta2, lam = p.lambda, mu = p.mu;
    if (xi <= lam)
        return mu * (mu + 1.0) * std::pow(2.0, alpha - 1.0) / (4.0 * (2.0 - alpha)) * delta *
               std::pow(lam, -1.0 - mu) * std::pow(xi, 1.0 + mu - alpha);
    Moc m(delta, mu, lam);
    return std::pow(2.0, alpha - 1.0) / alpha * m(xi) * std::pow(xi, -alpha);
}

double shape_A(double xi, const LemmaParams& p, double alpha) {
    double delta = p.delta2, lam = p.lambda, mu = p.mu;
    if (xi <= lam) return delta * std::pow(lam, -mu) * std::pow(xi, mu - alpha);
    return delta * std::pow(xi, -alpha);
}

double shape_K(double xi, const LemmaParams& p, double alpha) {
    double lam = p.lambda;
    if (xi <= lam) return p.delta1() * p.delta2 * std::pow(lam, -2.0) * std::pow(xi, 2.0 - alpha);
    Moc m1(p.delta1(), p.mu, lam);
    if (alpha > 1.0)
        return (p.delta2 * std::pow(xi / lam, alpha - 1.0) + p.V0) * m1(xi) * std::pow(xi, -alpha);
    return (p.delta2 + p.V0) * m1(xi) * std::pow(xi, -alpha);
}

double shape_K_subc(double xi, const LemmaParams& p, double alpha) {
    Moc m2(p.delta2, p.mu, p.lambda);
    return p.rhoF0 * m2(xi) * std::pow(p.lambda, 1.0 - alpha) + p.V0 * m2(xi) / p.lambda;
}

QuadValue lemma_quadrature(LemmaId id, double xi, const LemmaParams& p, double alpha, int d,
                           const EmpiricalConstants* consts) {
    Moc m1(p.delta1(), p.mu, p.lambda);
    Moc m2(p.delta2, p.mu, p.lambda);
    switch (id) {
        case LemmaId::DissipationLower:
            return dissipation_D_quadrature(xi, m2, alpha);
        case LemmaId::AUpper:
            return A_quadrature(xi, m2, alpha, d);
        case LemmaId::KUpper: {
            MocPair pair(m1, m2, p.kappa, 0.0, p.rho_bar, p.V0);
            return K_bar_quadrature(xi, pair, alpha, d);
        }
        case LemmaId::KSubcUpper: {
            double c4t = consts ? consts->C4t : 2.0 / ((alpha - 1.0) * (2.0 - alpha));
            double c0 = consts ? consts->C0 : 1.0;
            return k_subc_majorant_quadrature(xi, m2, alpha, d, p.rhoF0, c4t, c0);
        }
        case LemmaId::RieszMoc:
            return riesz_moc_bracket(xi, m2, alpha);
    }
    throw std::invalid_argument("lemma_quadrature: unknown lemma");
}

namespace {

double bound_shape(LemmaId id, double xi, const LemmaParams& p, double alpha) {
    switch (id) {
        case LemmaId::DissipationLower: return shape_D(xi, p, alpha);
        case LemmaId::AUpper: return shape_A(xi, p, alpha);
        case LemmaId::KUpper: return shape_K(xi, p, alpha);
        case LemmaId::KSubcUpper: return shape_K_subc(xi, p, alpha);
        case LemmaId::RieszMoc: {
            Moc m2(p.delta2, p.mu, p.lambda);
            return m2(xi) * std::pow(xi, alpha - 1.0);
        }
    }
    return 0.0;
}

bool lemma_applicable(LemmaId id, double alpha) {
    if (id == LemmaId::KSubcUpper || id == LemmaId::RieszMoc) return alpha > 1.0 && alpha < 2.0;
    return true;
}

} // namespace

EmpiricalConstants fit_empirical_constants(double alpha, int d,
                                           const std::vector<LemmaParams>& sweep, int n_xi) {
    if (sweep.empty()) throw std::invalid_argument("fit_empirical_constants: empty sweep");
    EmpiricalConstants out;
    out.C1 = std::numeric_limits<double>::infinity();
    out.C2 = out.C3 = out.C4 = out.C4t = 0.0;

    auto ratio_scan = [&](LemmaId id, const LemmaParams& p, auto&& update) {
        auto [lo, hi] = lemma_xi_range(id, p);
        if (!(hi > 1.01 * lo)) return; // empty stated range for this tuple
        for (double xi : log_spaced(lo, hi, n_xi)) {
            QuadValue q = lemma_quadrature(id, xi, p, alpha, d,
                                           id == LemmaId::KSubcUpper ? &out : nullptr);
            double s = bound_shape(id, xi, p, alpha);
            if (!(s > 0.0) || !std::isfinite(q.value / s)) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "degenerate ratio at xi=%.6g for %s", xi,
                              lemma_name(id));
                throw std::runtime_error(buf);
            }
            update(q.value / s);
        }
    };

    for (const auto& p : sweep) {
        ratio_scan(LemmaId::DissipationLower, p, [&](double r) { out.C1 = std::min(out.C1, r); });
        ratio_scan(LemmaId::AUpper, p, [&](double r) { out.C2 = std::max(out.C2, r); });
        ratio_scan(LemmaId::KUpper, p, [&](double r) { out.C3 = std::max(out.C3, r); });
    }
    if (lemma_applicable(LemmaId::RieszMoc, alpha)) {
        for (const auto& p : sweep)
            ratio_scan(LemmaId::RieszMoc, p, [&](double r) { out.C4t = std::max(out.C4t, r); });
        // C4t feeds the refined cross-term quadrature, so fit it first.
        for (const auto& p : sweep)
            ratio_scan(LemmaId::KSubcUpper, p, [&](double r) { out.C4 = std::max(out.C4, r); });
    } else {
        out.C4 = 1.0;
        out.C4t = 1.0;
    }

    char prov[160];
    std::snprintf(prov, sizeof prov,
                  "envelope fit: alpha=%.3g d=%d, %zu parameter tuples, %d xi points each%s", alpha,
                  d, sweep.size(), n_xi,
                  lemma_applicable(LemmaId::RieszMoc, alpha) ? "" : "; C4,C4t unused (alpha<=1)");
    out.provenance = prov;

    if (!(out.C1 > 0.0) || !(out.C2 > 0.0) || !(out.C3 > 0.0) || !(out.C4 > 0.0) ||
        !(out.C4t > 0.0) || !std::isfinite(out.C1))
        throw std::runtime_error("fit_empirical_constants: non-positive envelope");
    return out;
}

std::vector<LemmaParams> default_sweep(double alpha) {
    double mu_cap = std::min(alpha, 1.0);
    std::vector<LemmaParams> sweep;
    for (double lambda : {0.5, 2.0})
        for (double delta2 : {0.5, 1.0})
            for (double kappa : {0.5, 1.0})
                for (double mu_frac : {0.4, 0.8}) {
                    LemmaParams p;
                    p.lambda = lambda;
                    p.delta2 = delta2;
                    p.kappa = kappa;
                    p.mu = mu_frac * mu_cap;
                    p.V0 = 1.0;
                    p.rho_bar = 1.0;
                    p.rhoF0 = 1.0;
                    sweep.push_back(p);
                }
    return sweep;
}

LemmaReport verify_lemma(LemmaId id, double alpha, int d, const LemmaParams& params,
                         const std::vector<double>& xi_grid, const EmpiricalConstants& consts) {
    if (!lemma_applicable(id, alpha))
        throw std::invalid_argument(std::string(lemma_name(id)) + " requires alpha in (1,2)");
    LemmaReport rep;
    rep.lemma = id;
    rep.alpha = alpha;
    rep.d = d;
    rep.params = params;
    rep.pass = true;

    for (double xi : xi_grid) {
        QuadValue q = lemma_quadrature(id, xi, params, alpha, d, &consts);
        double shape = bound_shape(id, xi, params, alpha);
        double bound, margin;
        if (id == LemmaId::DissipationLower) {
            bound = consts.C1 * shape;
            margin = q.value - bound;
        } else if (id == LemmaId::RieszMoc) {
            // the closed form pins its own coefficient 2/((a-1)(2-a))
            bound = 2.0 / ((alpha - 1.0) * (2.0 - alpha)) * shape;
            margin = bound - q.value;
        } else {
            double c = id == LemmaId::AUpper ? consts.C2
                       : id == LemmaId::KUpper ? consts.C3
                                               : consts.C4;
            bound = c * shape;
            margin = bound - q.value;
        }
        bool pass = margin >= -q.error;
        rep.points.push_back({xi, q.value, bound, margin, q.error, pass});
        rep.pass = rep.pass && pass;
    }
    return rep;
}

LemmaReport verify_lemma(LemmaId id, double alpha, int d, const LemmaParams& params,
                         const EmpiricalConstants& consts, int n_xi) {
    auto [lo, hi] = lemma_xi_range(id, params);
    if (!(hi > 1.01 * lo)) {
        LemmaReport rep;
        rep.lemma = id;
        rep.alpha = alpha;
        rep.d = d;
        rep.params = params;
        rep.pass = true;
        rep.note = "stated xi-range is empty for these parameters";
        return rep;
    }
    return verify_lemma(id, alpha, d, params, log_spaced(lo, hi, n_xi), consts);
}

void append_report_csv(const LemmaReport& rep, std::string& csv, bool with_header) {
    if (with_header)
        csv += "lemma,alpha,d,delta1,delta2,mu,lambda,xi,quad_value,bound_value,margin,quad_err,pass\n";
    char buf[320];
    for (const auto& pt : rep.points) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      lemma_name(rep.lemma), rep.alpha, rep.d, rep.params.delta1(),
                      rep.params.delta2, rep.params.mu, rep.params.lambda, pt.xi, pt.quad_value,
                      pt.bound_value, pt.margin, pt.quad_err, pt.pass ? 1 : 0);
        csv += buf;
    }
}

std::string report_to_json(const LemmaReport& rep) {
    nlohmann::json j;
    j["lemma"] = lemma_name(rep.lemma);
    j["alpha"] = rep.alpha;
    j["d"] = rep.d;
    j["delta1"] = rep.params.delta1();
    j["delta2"] = rep.params.delta2;
    j["mu"] = rep.params.mu;
    j["lambda"] = rep.params.lambda;
    j["V0"] = rep.params.V0;
    j["pass"] = rep.pass;
    if (!rep.note.empty()) j["note"] = rep.note;
    auto& pts = j["points"];
    for (const auto& pt : rep.points) {
        pts.push_back({{"xi", pt.xi},
                       {"quad_value", pt.quad_value},
                       {"bound_value", pt.bound_value},
                       {"margin", pt.margin},
                       {"quad_err", pt.quad_err},
                       {"pass", pt.pass}});
    }
    return j.dump(2);
}

} // namespace ualign
