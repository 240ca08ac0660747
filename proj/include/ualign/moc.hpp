#ifndef UALIGN_MOC_HPP
#define UALIGN_MOC_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "ualign/scalar_field.hpp"

namespace ualign {

/** Modulus of continuity
 *   omega(xi) = delta*(xi/lambda) - (delta/4)*(xi/lambda)^(1+mu)   xi <= lambda
 *   omega(xi) = (3/4)*delta + (delta/2)*log(xi/lambda)             xi >  lambda
 * increasing and concave with omega'(0+) = delta/lambda.
 *
 * The scale is stored as log(lambda): admissible parameter selections push
 * lambda below the smallest positive double, while omega itself stays finite
 * at any representable xi through the log branch. */
class Moc {
  public:
    Moc(double delta, double mu, double lambda);
    static Moc from_log_lambda(double delta, double mu, double log_lambda);

    double delta() const { return delta_; }
    double mu() const { return mu_; }
    double lambda() const;
    double log_lambda() const { return log_lambda_; }

    /** omega(xi); rejects xi <= 0. */
    double operator()(double xi) const;
    /** One-sided derivative (right-sided at the branch point). */
    double derivative(double xi) const;
    double second_derivative(double xi) const;

    /** omega(xi+gap) - omega(xi), evaluated without cancellation for small
     * |gap|; requires xi > 0 and xi+gap > 0. */
    double diff(double xi, double gap) const;

    /** A copy with delta scaled by s (omega is linear in delta). */
    Moc scaled_delta(double s) const { return from_log_lambda(s * delta_, mu_, log_lambda_); }

  private:
    double delta_;
    double mu_;
    double log_lambda_;
};

/** The coupled pair (omega1 for rho, omega2 for u) with delta1 = kappa*delta2,
 * shared lambda and mu, decay rate c0 for omega2(xi,t) = exp(-c0 t) omega2(xi),
 * and the breakthrough thresholds Xi_i (stored in logs, same reason). */
struct MocPair {
    Moc omega1;
    Moc omega2;
    double kappa;
    double c0;
    double log_Xi1;
    double log_Xi2;

    MocPair(Moc omega1_, Moc omega2_, double kappa_, double c0_, double rho_bar, double V0);
    /** Rebuilds a pair from persisted threshold logs. */
    static MocPair from_logs(Moc omega1, Moc omega2, double kappa, double c0, double log_Xi1,
                             double log_Xi2);
    double Xi1() const;
    double Xi2() const;
};

/** Largest lambda for which a bounded Lipschitz field obeys the family:
 * (2|f|_inf/|grad f|_inf) exp(-4 |f|_inf/delta). Returns +inf for a
 * constant field. */
double admissible_lambda(const ScalarField& f, double delta);
/** log of the same bound (still finite when the bound underflows). */
double log_admissible_lambda(const ScalarField& f, double delta);

/** Lattice shift set shared by the breakthrough scan and the discrete
 * Hoelder seminorms: every coordinate-axis shift plus 64 seeded random
 * lattice shifts. Distances are flat-torus (shortest image). */
class ShiftSet {
  public:
    explicit ShiftSet(const TorusGrid& grid, std::uint64_t seed = 0x5CA7);
    struct Shift {
        std::array<int, 3> offset;
        double distance;
    };
    const std::vector<Shift>& shifts() const { return shifts_; }

  private:
    std::vector<Shift> shifts_;
};

struct ScanResult {
    double margin;          // min over shifts of decay*omega(|s|) - M(s)
    double xi_at_argmin;    // torus distance of the worst shift
    std::array<int, 3> argmin_shift;
    double max_increment;   // M at the worst shift
    bool pass;              // margin > 0
};

/** Discrete breakthrough scan: M(s) = max_x (f(x+s)-f(x)) over the shift
 * set; reports the worst margin against decay_factor * omega(|s|). */
ScanResult scan_breakthrough(const ScalarField& f, const Moc& m, double decay_factor,
                             const ShiftSet& shifts);
ScanResult scan_breakthrough(const ScalarField& f, const Moc& m, double decay_factor = 1.0);

/** Discrete C^sigma seminorm over the shift set:
 * max_s max_x |f(x+s)-f(x)| / |s|^sigma. */
double holder_seminorm(const ScalarField& f, double sigma, const ShiftSet& shifts);

} // namespace ualign

#endif
