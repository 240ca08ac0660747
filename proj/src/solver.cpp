#include "ualign/solver.hpp"

#include <cmath>

namespace ualign {

void SolverConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("SolverConfig: alpha outside (0,2)");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("SolverConfig: cfl outside (0,1]");
    if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end must be positive");
    if (output_stride < 1) throw std::invalid_argument("SolverConfig: output_stride must be >= 1");
}

namespace {

ScalarField maybe_dealias(ScalarField f, bool on) {
    return on ? dealias(f) : f;
}

void check_finite(const ScalarField& f, double t, const char* what) {
    if (!f.finite())
        throw NumericalEvent(NumericalEvent::Kind::Blowup, t,
                             std::string("non-finite values in ") + what);
}

} // namespace

ScalarField alignment_force(const ScalarField& rho, const ScalarField& u, double alpha,
                            bool do_dealias) {
    require_same_grid(rho, u, "alignment_force");
    ScalarField rho_u = maybe_dealias(rho * u, do_dealias);
    ScalarField lap_rho_u = fractional_laplacian(rho_u, alpha);
    ScalarField lap_rho = fractional_laplacian(rho, alpha);
    ScalarField force = maybe_dealias(lap_rho.to_physical() * u - lap_rho_u.to_physical(), do_dealias);
    return force.to_physical();
}

Rhs rhs(const FlowState& state, const SolverConfig& cfg) {
    const auto& rho = state.rho;
    const auto& u = state.u;

    ScalarField rho_u = maybe_dealias(rho * u, cfg.dealias);
    check_finite(rho_u, state.t, "rho*u");

    ScalarField drho = cfg.frozen_density
                           ? ScalarField::constant(rho.grid_ptr(), 0.0)
                           : (-1.0 * partial_x1(rho_u).to_physical());

    ScalarField lap_rho_u = fractional_laplacian(rho_u, cfg.alpha).to_physical();
    ScalarField lap_rho = fractional_laplacian(rho, cfg.alpha).to_physical();
    ScalarField dudx = partial_x1(u).to_physical();

    ScalarField du = maybe_dealias(lap_rho * u - lap_rho_u - u * dudx, cfg.dealias).to_physical();
    check_finite(du, state.t, "du/dt");
    return Rhs{std::move(drho), std::move(du)};
}

double stable_dt(const FlowState& state, const SolverConfig& cfg) {
    const double eps = 1e-12;
    const double c_stab = 2.0;
    const double dx = state.rho.grid().dx();
    double adv = dx / (state.u.sup_norm() + eps);
    double dis = std::pow(dx, cfg.alpha) / (c_stab * state.rho.sup_norm());
    return cfg.cfl * std::min(adv, dis);
}

namespace {

FlowState axpy(const FlowState& s, double a, const Rhs& k, double dt_time) {
    ScalarField rho = s.rho + a * k.drho_dt;
    ScalarField u = s.u + a * k.du_dt;
    return FlowState(std::move(rho), std::move(u), s.t + dt_time);
}

FlowState step_rk4(const FlowState& state, const SolverConfig& cfg, double dt) {
    Rhs k1 = rhs(state, cfg);
    Rhs k2 = rhs(axpy(state, 0.5 * dt, k1, 0.5 * dt), cfg);
    Rhs k3 = rhs(axpy(state, 0.5 * dt, k2, 0.5 * dt), cfg);
    Rhs k4 = rhs(axpy(state, dt, k3, dt), cfg);

    auto r = state.rho.physical();
    auto u = state.u.physical();
    auto r1 = k1.drho_dt.physical(), r2 = k2.drho_dt.physical(),
         r3 = k3.drho_dt.physical(), r4 = k4.drho_dt.physical();
    auto u1 = k1.du_dt.physical(), u2 = k2.du_dt.physical(),
         u3 = k3.du_dt.physical(), u4 = k4.du_dt.physical();
    const double w = dt / 6.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] += w * (r1[i] + 2.0 * r2[i] + 2.0 * r3[i] + r4[i]);
        u[i] += w * (u1[i] + 2.0 * u2[i] + 2.0 * u3[i] + u4[i]);
    }
    return FlowState(ScalarField(state.rho.grid_ptr(), std::move(r)),
                     ScalarField(state.u.grid_ptr(), std::move(u)), state.t + dt);
}

// Crank-Nicolson on L = -rho_mean * Lambda^alpha acting on u; everything
// else explicit. Trapezoidal corrector keeps the scheme 2nd order:
//   u* :     (I - dt/2 L) u* = u^n + dt N(y^n) + dt/2 L u^n
//   u^{n+1}: (I - dt/2 L) u^{n+1} = u^n + dt/2 (N(y^n)+N(y*)) + dt/2 L u^n
// and rho rides along with the explicit trapezoid.
FlowState step_imex_cn(const FlowState& state, const SolverConfig& cfg, double dt) {
    const TorusGrid& g = state.rho.grid();
    const double rho_mean = state.rho.integral() / std::pow(g.length(), g.dim());

    auto lam = [&g, &cfg](std::size_t i) {
        double kn = g.wavevector_norm(i);
        return kn == 0.0 ? 0.0 : std::pow(kn, cfg.alpha);
    };

    // Explicit part N_u = du_dt_full + rho_mean * Lambda^alpha u.
    auto explicit_rhs = [&](const FlowState& s) {
        Rhs full = rhs(s, cfg);
        ScalarField stiff = rho_mean * fractional_laplacian(s.u, cfg.alpha).to_physical();
        return Rhs{full.drho_dt, full.du_dt + stiff};
    };

    auto cn_solve = [&](const ScalarField& u_n, const ScalarField& nonlin, double w_nl) {
        auto un_hat = u_n.spectral();
        auto nl_hat = nonlin.spectral();
        for (std::size_t i = 0; i < un_hat.size(); ++i) {
            double l = rho_mean * lam(i);
            un_hat[i] = (un_hat[i] * (1.0 - 0.5 * dt * l) + w_nl * nl_hat[i]) / (1.0 + 0.5 * dt * l);
        }
        return ScalarField(u_n.grid_ptr(), std::move(un_hat)).to_physical();
    };

    Rhs n0 = explicit_rhs(state);
    ScalarField rho_star = state.rho + dt * n0.drho_dt;
    ScalarField u_star = cn_solve(state.u, n0.du_dt, dt);
    FlowState mid(std::move(rho_star), std::move(u_star), state.t + dt);

    Rhs n1 = explicit_rhs(mid);
    ScalarField rho_new = state.rho + (0.5 * dt) * (n0.drho_dt + n1.drho_dt);
    ScalarField u_new = cn_solve(state.u, 0.5 * (n0.du_dt + n1.du_dt), dt);
    return FlowState(std::move(rho_new), std::move(u_new), state.t + dt);
}

} // namespace

FlowState step(const FlowState& state, const SolverConfig& cfg, double dt) {
    const double u_before = state.u.sup_norm();
    FlowState next = cfg.scheme == TimeScheme::ExplicitRK4 ? step_rk4(state, cfg, dt)
                                                           : step_imex_cn(state, cfg, dt);
    check_finite(next.rho, next.t, "rho");
    check_finite(next.u, next.t, "u");
    const double u_after = next.u.sup_norm();
    if (u_after > 10.0 * u_before + 1e-8)
        throw NumericalEvent(NumericalEvent::Kind::Blowup, next.t,
                             "instability: |u|_inf grew by more than 10x in one step");
    return next;
}

AuxiliaryFields extract_auxiliary(const FlowState& state, double alpha) {
    if (state.rho.min() <= 0.0)
        throw NumericalEvent(NumericalEvent::Kind::Vacuum, state.t, "vacuum: min rho <= 0");

    ScalarField G = partial_x1(state.u).to_physical() -
                    fractional_laplacian(state.rho, alpha).to_physical();
    auto g = G.physical();
    auto r = state.rho.physical();
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = g[i] / r[i];
    ScalarField F(state.rho.grid_ptr(), std::move(f), state.t);

    auto dF = partial_x1(F).physical();
    std::vector<double> h(dF.size());
    for (std::size_t i = 0; i < dF.size(); ++i) h[i] = dF[i] / r[i];
    ScalarField H(state.rho.grid_ptr(), std::move(h), state.t);

    return AuxiliaryFields{std::move(G), std::move(F), std::move(H)};
}

} // namespace ualign
