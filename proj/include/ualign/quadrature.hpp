#ifndef UALIGN_QUADRATURE_HPP
#define UALIGN_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace ualign {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // accumulated error estimate
    bool converged = true;
};

/** Adaptive Gauss-Kronrod (G7,K15) on [a,b] to the given tolerances. */
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol = 1e-10, double abs_tol = 0.0, int max_intervals = 4000);

/** Integrates over [pts[0], pts.back()] splitting at every interior point;
 * breakpoints should mark kinks of the integrand. */
QuadResult integrate_piecewise(const std::function<double(double)>& f,
                               std::vector<double> pts, double rel_tol = 1e-10,
                               double abs_tol = 0.0);

} // namespace ualign

#endif
