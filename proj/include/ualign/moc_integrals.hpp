#ifndef UALIGN_MOC_INTEGRALS_HPP
#define UALIGN_MOC_INTEGRALS_HPP

#include "ualign/moc.hpp"
#include "ualign/quadrature.hpp"

namespace ualign {

/** Positive normalization of the singular kernel,
 * c_alpha = 2^alpha Gamma((d+alpha)/2) / (pi^{d/2} |Gamma(-alpha/2)|). */
double riesz_constant(double alpha, int d);

struct QuadValue {
    double value = 0.0;
    double error = 0.0;
};

/** Dissipation integral (no prefactor):
 *   int_0^{xi/2} [2w(xi)-w(xi+2e)-w(xi-2e)] e^{-1-alpha} de
 * + int_{xi/2}^inf [2w(xi)-w(2e+xi)+w(2e-xi)] e^{-1-alpha} de.
 * The e->0 singularity is handled by a second-difference expansion and the
 * tail is integrated analytically once the integrand is in the log branch.
 * Strictly positive by concavity. Throws a Quadrature event on
 * nonconvergence. */
QuadValue dissipation_D_quadrature(double xi, const Moc& m, double alpha);

/** A_{alpha}(xi) = c_alpha p.v. int_{R^d} [w(|xi e1 - z|) - w(xi)] / |z|^{d+alpha} dz,
 * reduced to polar (s,theta) coordinates for d >= 2 (sigma_0 = 1 for d = 2);
 * the p.v. at z = 0 cancels in the angular average and the remaining
 * O(|z|^2) core is handled by series expansion. */
QuadValue A_quadrature(double xi, const Moc& m, double alpha, int d);

/** Majorant of the cross term:
 * Kbar(xi) = 2 c_alpha int_{|z|<=2xi} w1(|z|) |w2(|xi - z1|) - w2(xi)| / |z|^{d+alpha} dz. */
QuadValue K_bar_quadrature(double xi, const MocPair& pair, double alpha, int d);

/** The Riesz-commutator bracket
 * int_0^xi w2(e)/e^{2-alpha} de + xi int_xi^inf w2(e)/e^{3-alpha} de
 * for alpha in (1,2); the log-branch tail is analytic. */
QuadValue riesz_moc_bracket(double xi, const Moc& m2, double alpha);

/** C4t * bracket + C0 * rho_bar * F0_norm * xi (the full bound of the
 * Riesz modulus lemma). Rejects alpha outside (1,2). */
QuadValue riesz_moc_bound(double xi, const Moc& m2, double alpha, double F0_norm,
                          double rho_bar, double C4t, double C0 = 1.0);

/** Majorant used for the refined subcritical cross-term constant:
 * 2 c_alpha sigma_{d-1} int_0^{2xi} [C0*rhoF0*e + 2 C4t/((a-1)(2-a)) w2(e) e^{a-1}]
 *                                   w2(e) / e^{1+alpha} de,  alpha in (1,2). */
QuadValue k_subc_majorant_quadrature(double xi, const Moc& m2, double alpha, int d,
                                     double rhoF0, double C4t, double C0 = 1.0);

} // namespace ualign

#endif
