#ifndef UALIGN_LEMMA_VERIFY_HPP
#define UALIGN_LEMMA_VERIFY_HPP

#include <string>
#include <vector>

#include "ualign/moc_integrals.hpp"

namespace ualign {

/** The analysis only asserts existence of its constants; these are the
 * empirical envelopes, fitted per (alpha,d) by ratio sweeps. C1 is a lower
 * envelope (dissipation), the others are upper envelopes. */
struct EmpiricalConstants {
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
    double C4 = 0.0;  // refined cross-term constant, alpha in (1,2)
    double C4t = 0.0; // Riesz-modulus bracket envelope, alpha in (1,2)
    double C0 = 1.0;  // absolute constant of the Lipschitz remainder, fixed
    std::string provenance;
};

enum class LemmaId { DissipationLower, AUpper, KUpper, KSubcUpper, RieszMoc };

const char* lemma_name(LemmaId id);

/** Parameters of one MOC configuration in a sweep. */
struct LemmaParams {
    double delta2 = 1.0;
    double kappa = 1.0; // delta1 = kappa * delta2
    double mu = 0.5;
    double lambda = 1.0;
    double V0 = 1.0;    // fixes Xi2
    double rho_bar = 1.0; // fixes Xi1
    double rhoF0 = 1.0; // rho_upper * |F0|_inf, used by the refined cross term
    double delta1() const { return kappa * delta2; }
};

struct LemmaPoint {
    double xi;
    double quad_value;
    double bound_value;
    double margin;   // oriented so that pass <=> margin >= -quad_err
    double quad_err;
    bool pass;
};

struct LemmaReport {
    LemmaId lemma;
    double alpha;
    int d;
    LemmaParams params;
    std::vector<LemmaPoint> points;
    bool pass;
    std::string note;
};

/** Log-spaced grid of n points on [lo, hi]. */
std::vector<double> log_spaced(double lo, double hi, int n);

/** The xi range a lemma is stated on, for the given parameters. */
std::pair<double, double> lemma_xi_range(LemmaId id, const LemmaParams& p);

/** Closed-form bound shapes with the lemma constant divided out. */
double shape_D(double xi, const LemmaParams& p, double alpha);
double shape_A(double xi, const LemmaParams& p, double alpha);
double shape_K(double xi, const LemmaParams& p, double alpha);
double shape_K_subc(double xi, const LemmaParams& p, double alpha);

/** Raw quadrature value of the lemma's left-hand side. */
QuadValue lemma_quadrature(LemmaId id, double xi, const LemmaParams& p, double alpha, int d,
                           const EmpiricalConstants* consts = nullptr);

/** Envelope fit over a parameter sweep: C1 = inf of quad/shape, the others
 * sup of quad/shape. Throws on degenerate ratios, naming the xi. */
EmpiricalConstants fit_empirical_constants(double alpha, int d,
                                           const std::vector<LemmaParams>& sweep,
                                           int n_xi = 40);
/** The default sweep (several delta, mu, lambda per the fit contract). */
std::vector<LemmaParams> default_sweep(double alpha);

/** Per-xi comparison of quadrature vs closed form with fitted constants. */
LemmaReport verify_lemma(LemmaId id, double alpha, int d, const LemmaParams& params,
                         const std::vector<double>& xi_grid, const EmpiricalConstants& consts);
/** Same, with the lemma's own default grid (>= n_xi log-spaced points). */
LemmaReport verify_lemma(LemmaId id, double alpha, int d, const LemmaParams& params,
                         const EmpiricalConstants& consts, int n_xi = 40);

/** CSV rows: lemma, alpha, d, delta1, delta2, mu, lambda, xi, quad_value,
 * bound_value, margin, quad_err, pass. */
void append_report_csv(const LemmaReport& report, std::string& csv, bool with_header);
std::string report_to_json(const LemmaReport& report);

} // namespace ualign

#endif
