#include "ualign/param_select.hpp"

#include <cmath>
#include <limits>

namespace ualign {

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Subcritical: return "subcritical";
        case Regime::Critical: return "critical";
        case Regime::Supercritical: return "supercritical";
    }
    return "unknown";
}

namespace {

// One lambda-dependent contribution coef * exp(log_shift) * lambda^b
// (worst-case xi already substituted); kept as exp(a + b*L) with
// L = log(lambda) since the Xi_i^p factors overflow any double.
struct LamTerm {
    std::string label;
    double a; // log of the coefficient, including any Xi_i^p factors' e_i parts
    double b; // power of lambda, must be positive
};

struct Ineq {
    std::string name;
    double budget;              // available dissipation at the worst xi
    double fixed;               // lambda-independent (delta/kappa) group
    std::vector<LamTerm> lams;
};

void push_term(std::vector<LamTerm>& v, const std::string& label, double coef, double log_shift,
               double b) {
    if (coef == 0.0) return;
    if (!(coef > 0.0) || !std::isfinite(coef))
        throw InfeasibleSelection(label, "nonfinite or negative coefficient in " + label);
    v.push_back({label, std::log(coef) + log_shift, b});
}

struct Knobs {
    double delta1, delta2, kappa, mu;
};

// The four negativity inequalities shared by all regimes, with the
// regime-specific advection and cross-term closures already substituted.
// Each bound term is normalized by the dissipation shape at its worst xi
// (xi = lambda for the near branch, xi = Xi_i for the far branch).
std::vector<Ineq> build_inequalities(Regime regime, double alpha, const SelectionInputs& in,
                                     const EmpiricalConstants& k, const Knobs& kb) {
    const double P = in.rho_lower, R = in.rho_upper;
    const double mu = kb.mu, d1 = kb.delta1, d2 = kb.delta2, kap = kb.kappa;
    const double kDs = mu * (mu + 1.0) * std::pow(2.0, alpha - 1.0) / (4.0 * (2.0 - alpha));
    const double kDl = std::pow(2.0, alpha - 1.0) / alpha;
    const double e1 = 2.0 * R / d1 - 1.5;  // log(Xi1/lambda)
    const double e2 = 2.0 * in.V0 / d2 - 1.5;
    const bool super = regime == Regime::Supercritical;
    const double Us = super ? *in.u_Csigma : 0.0;
    const double s_exp = super ? (*in.sigma - (1.0 - alpha)) : 0.0;

    std::vector<Ineq> out;

    { // density equation, 0 < xi <= lambda, normalized by d1 l^{-1-mu} xi^{1+mu-a}
        Ineq q{"rho_small_xi", P * k.C1 * kDs, k.C2 * d1, {}};
        push_term(q.lams, "rho_small:F0", 2.0 * R * in.F0_norm, 0.0, alpha);
        push_term(q.lams, "rho_small:gradF0", R * R * in.gradF0_norm / d1, 0.0, 1.0 + alpha);
        if (in.H0_norm > 0.0) {
            if (!(in.c0 > 0.0))
                throw InfeasibleSelection("rho_small:H0", "H0 term requires a positive c0");
            push_term(q.lams, "rho_small:H0", R * R * R * in.H0_norm / (in.c0 * kap), 0.0, alpha);
        }
        if (super)
            push_term(q.lams, "rho_small:advection", Us, 0.0, s_exp);
        else if (alpha > 1.0)
            push_term(q.lams, "rho_small:advection", d2, 0.0, alpha - 1.0);
        else
            q.fixed += d2; // critical: scaling-neutral, controlled by small delta2
        out.push_back(std::move(q));
    }
    { // density equation, lambda < xi <= Xi1, normalized by omega1(xi) xi^{-a}
        Ineq q{"rho_large_xi", P * k.C1 * kDl, k.C2 * d1, {}};
        push_term(q.lams, "rho_large:F0", 2.0 * R * in.F0_norm, alpha * e1, alpha);
        push_term(q.lams, "rho_large:gradF0", (4.0 / 3.0) * R * R * in.gradF0_norm / d1,
                  (1.0 + alpha) * e1, 1.0 + alpha);
        if (in.H0_norm > 0.0)
            push_term(q.lams, "rho_large:H0",
                      (4.0 / 3.0) * R * R * R * in.H0_norm / (in.c0 * kap), (1.0 + alpha) * e1,
                      alpha);
        if (super)
            push_term(q.lams, "rho_large:advection", (2.0 / 3.0) * Us, s_exp * e1, s_exp);
        else if (alpha > 1.0)
            push_term(q.lams, "rho_large:advection", 0.5 * d2, (alpha - 1.0) * e1, alpha - 1.0);
        else
            q.fixed += 0.5 * d2;
        out.push_back(std::move(q));
    }
    { // velocity equation, 0 < xi <= lambda, normalized by d2 l^{-1-mu} xi^{1+mu-a}
        Ineq q{"u_small_xi", P * k.C1 * kDs, (k.C2 + k.C3) * d1, {}};
        push_term(q.lams, "u_small:c0", in.c0, 0.0, alpha);
        if (super)
            push_term(q.lams, "u_small:advection", Us, 0.0, s_exp);
        else if (alpha > 1.0)
            push_term(q.lams, "u_small:advection", d2, 0.0, alpha - 1.0);
        else
            q.fixed += d2;
        out.push_back(std::move(q));
    }
    { // velocity equation, lambda < xi <= Xi2, normalized by omega2(xi) xi^{-a}
        Ineq q{"u_large_xi", P * k.C1 * kDl, 0.0, {}};
        if (regime == Regime::Subcritical) {
            q.fixed += k.C2 * d2 * kap;
            push_term(q.lams, "u_large:K_F0", k.C4 * R * in.F0_norm, alpha * e2, 1.0);
            push_term(q.lams, "u_large:K_V0", k.C4 * in.V0, alpha * e2, alpha - 1.0);
        } else {
            q.fixed += (k.C3 * (d2 + in.V0) + k.C2 * d2) * kap;
        }
        push_term(q.lams, "u_large:c0", in.c0, alpha * e2, alpha);
        if (super)
            push_term(q.lams, "u_large:advection", (2.0 / 3.0) * Us, s_exp * e2, s_exp);
        else if (alpha > 1.0)
            push_term(q.lams, "u_large:advection", 0.5 * d2, (alpha - 1.0) * e2, alpha - 1.0);
        else
            q.fixed += 0.5 * d2;
        out.push_back(std::move(q));
    }
    return out;
}

std::vector<InequalityCheck> evaluate(const std::vector<Ineq>& qs, double L) {
    std::vector<InequalityCheck> out;
    for (const auto& q : qs) {
        double lhs = q.fixed;
        for (const auto& t : q.lams) {
            double e = t.a + t.b * L;
            lhs += e < -740.0 ? 0.0 : std::exp(e);
        }
        double rhs = 0.5 * q.budget;
        out.push_back({q.name, lhs, rhs, lhs <= rhs});
    }
    return out;
}

void validate_inputs(Regime regime, double alpha, const SelectionInputs& in) {
    switch (regime) {
        case Regime::Subcritical:
            if (!(alpha > 1.0 && alpha < 2.0))
                throw std::invalid_argument("select_parameters: subcritical needs alpha in (1,2)");
            break;
        case Regime::Critical:
            if (alpha != 1.0)
                throw std::invalid_argument("select_parameters: critical regime needs alpha = 1");
            break;
        case Regime::Supercritical:
            if (!(alpha > 0.0 && alpha < 1.0))
                throw std::invalid_argument("select_parameters: supercritical needs alpha in (0,1)");
            if (!in.sigma || !(*in.sigma > 1.0 - alpha && *in.sigma < 1.0))
                throw std::invalid_argument(
                    "select_parameters: supercritical needs sigma in (1-alpha,1)");
            if (!in.u_Csigma || !(*in.u_Csigma >= 0.0) || !std::isfinite(*in.u_Csigma))
                throw std::invalid_argument("select_parameters: supercritical needs finite u_Csigma");
            break;
    }
    if (!(in.rho_lower > 0.0) || !(in.rho_upper >= in.rho_lower))
        throw std::invalid_argument("select_parameters: need 0 < rho_lower <= rho_upper");
    if (in.V0 < 0.0 || in.F0_norm < 0.0 || in.gradF0_norm < 0.0 || in.H0_norm < 0.0)
        throw std::invalid_argument("select_parameters: norms must be nonnegative");
}

} // namespace

std::vector<InequalityCheck> verify_selection(Regime regime, double alpha,
                                              const SelectionInputs& in,
                                              const EmpiricalConstants& consts, double delta1,
                                              double delta2, double mu, double log_lambda) {
    Knobs kb{delta1, delta2, delta1 / delta2, mu};
    return evaluate(build_inequalities(regime, alpha, in, consts, kb), log_lambda);
}

Selection select_parameters(Regime regime, double alpha, const SelectionInputs& in,
                            const EmpiricalConstants& k) {
    validate_inputs(regime, alpha, in);
    const double P = in.rho_lower;
    if (!(k.C1 > 0.0 && k.C2 > 0.0 && k.C3 > 0.0))
        throw InfeasibleSelection("constants", "empirical constants must be positive");

    double mu, delta1, delta2, kappa;
    const double kDl = std::pow(2.0, alpha - 1.0) / alpha;

    if (regime == Regime::Subcritical) {
        mu = 0.5 * alpha;
        const double kDs = mu * (mu + 1.0) * std::pow(2.0, alpha - 1.0) / (4.0 * (2.0 - alpha));
        double B_s = P * k.C1 * kDs, B_l = P * k.C1 * kDl;
        // C2 d <= C1 a P / 32 keeps the quoted section rule at 2x margin
        delta2 = std::min({B_s / (4.0 * k.C2), k.C1 * alpha * P / (32.0 * k.C2),
                           B_l / (4.0 * k.C2), k.C1 * P / (8.0 * k.C2),
                           B_s / (4.0 * (k.C2 + k.C3)), 0.9});
        kappa = 1.0;
        delta1 = delta2;
        if (!(k.C4 > 0.0)) throw InfeasibleSelection("constants", "C4 must be positive (subcritical)");
    } else if (regime == Regime::Critical) {
        mu = 0.5;
        const double kDs = mu * (mu + 1.0) / 4.0; // 2^{a-1}=1 at alpha=1
        double B_s = P * k.C1 * kDs, B_l = P * k.C1 * kDl;
        delta2 = std::min({B_s / 8.0, B_l / 4.0, 0.9});
        kappa = std::min({1.0, B_s / (8.0 * k.C2 * delta2), B_s / (8.0 * (k.C2 + k.C3) * delta2),
                          B_l / (8.0 * (k.C3 * (delta2 + in.V0) + k.C2 * delta2)),
                          k.C1 * P / (8.0 * (k.C3 * (delta2 + in.V0) + k.C2 * delta2))});
        delta1 = kappa * delta2;
    } else {
        mu = 0.5 * (*in.sigma - (1.0 - alpha));
        const double kDs = mu * (mu + 1.0) * std::pow(2.0, alpha - 1.0) / (4.0 * (2.0 - alpha));
        double B_s = P * k.C1 * kDs, B_l = P * k.C1 * kDl;
        delta2 = 0.5;
        kappa = std::min({1.0, B_s / (4.0 * k.C2 * delta2), B_l / (4.0 * k.C2 * delta2),
                          B_s / (4.0 * (k.C2 + k.C3) * delta2),
                          B_l / (4.0 * (k.C3 * (delta2 + in.V0) + k.C2 * delta2))});
        delta1 = kappa * delta2;
    }

    if (!(delta2 > 0.0) || !(delta1 > 0.0) || !(kappa > 0.0))
        throw InfeasibleSelection("delta", "no positive delta closes the delta-group inequalities");

    Knobs kb{delta1, delta2, kappa, mu};
    auto ineqs = build_inequalities(regime, alpha, in, k, kb);

    // Every lambda term vanishes as lambda -> 0; solve each cap in logs.
    double L = std::log(0.25);
    L = std::min(L, -(2.0 * in.rho_upper / delta1 + 2.0 * in.V0 / delta2) - std::log(2.0));
    std::string binding = "xi_threshold_cap";
    for (const auto& q : ineqs) {
        double room = q.budget / 2.0 - q.fixed; // what the lambda group may use
        if (!(room > 0.0))
            throw InfeasibleSelection(q.name, "delta group exhausts the dissipation budget of " +
                                                  q.name);
        double share = std::min(room, q.budget / 4.0) / std::max<std::size_t>(q.lams.size(), 1);
        for (const auto& t : q.lams) {
            if (!(t.b > 0.0))
                throw InfeasibleSelection(t.label, "non-contracting lambda power in " + t.label);
            double cap = (std::log(share) - t.a) / t.b;
            if (cap < L) {
                L = cap;
                binding = t.label;
            }
        }
    }
    if (!std::isfinite(L)) throw InfeasibleSelection(binding, "lambda cap is not finite");

    auto checks = evaluate(ineqs, L);
    for (const auto& c : checks)
        if (!c.ok)
            throw InfeasibleSelection(c.name, "closed-loop verification failed at " + c.name);

    Moc omega1 = Moc::from_log_lambda(delta1, mu, L);
    Moc omega2 = Moc::from_log_lambda(delta2, mu, L);
    MocPair pair(omega1, omega2, kappa, std::max(in.c0, 0.0), in.rho_upper, in.V0);
    return Selection{regime, alpha, delta1, delta2, kappa, mu, L, std::move(pair), std::move(checks)};
}

} // namespace ualign
