#ifndef UALIGN_SOLVER_HPP
#define UALIGN_SOLVER_HPP

#include <string>

#include "ualign/events.hpp"
#include "ualign/scalar_field.hpp"

namespace ualign {

/** State advanced by the solver: density, scalar velocity along e1, time. */
struct FlowState {
    ScalarField rho;
    ScalarField u;
    double t = 0.0;

    FlowState(ScalarField rho_, ScalarField u_, double t_ = 0.0)
        : rho(std::move(rho_)), u(std::move(u_)), t(t_) {
        require_same_grid(rho, u, "FlowState");
        rho.set_time(t);
        u.set_time(t);
    }
};

enum class TimeScheme { ExplicitRK4, ImexCN };

struct SolverConfig {
    double alpha = 1.0;          // dissipation order, in (0,2)
    TimeScheme scheme = TimeScheme::ExplicitRK4;
    double cfl = 0.9;            // safety factor in (0,1]
    bool dealias = true;
    bool frozen_density = false; // fractal-Burgers mode: rho is not advanced
    double t_end = 10.0;
    int output_stride = 50;
    double blowup_gradient_threshold = 1e4; // on |grad rho|+|grad u|

    void validate() const;
};

/** G = d_{x1} u - Lambda^alpha rho and its transported companions
 * F = G/rho, H = (d_{x1} F)/rho. */
struct AuxiliaryFields {
    ScalarField G;
    ScalarField F;
    ScalarField H;
};

/** The alignment force C_alpha(u,rho) = -Lambda^alpha(rho u) + (Lambda^alpha rho) u,
 * with the product formed in physical space. */
ScalarField alignment_force(const ScalarField& rho, const ScalarField& u, double alpha,
                            bool do_dealias = true);

struct Rhs {
    ScalarField drho_dt;
    ScalarField du_dt;
};

/** Right-hand side of the system: drho/dt = -d_{x1}(rho u) (zero when the
 * density is frozen), du/dt = -u d_{x1}u + C_alpha(u,rho). Throws a Blowup
 * event if any product is non-finite. */
Rhs rhs(const FlowState& state, const SolverConfig& cfg);

/** dt = cfl * min( dx/(|u|_inf + eps), dx^alpha/(2 |rho|_inf) ). */
double stable_dt(const FlowState& state, const SolverConfig& cfg);

/** Advances one step of the configured scheme. Classical RK4, or the 2nd
 * order IMEX scheme with -mean(rho)*Lambda^alpha u taken by Crank-Nicolson
 * in spectral space and every remaining term explicit. Throws a Blowup
 * event if |u|_inf grows by more than 10x in the step. */
FlowState step(const FlowState& state, const SolverConfig& cfg, double dt);

/** Extracts (G,F,H); throws a Vacuum event if min rho <= 0. */
AuxiliaryFields extract_auxiliary(const FlowState& state, double alpha);

} // namespace ualign

#endif
