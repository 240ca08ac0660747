#ifndef UALIGN_PARAM_SELECT_HPP
#define UALIGN_PARAM_SELECT_HPP

#include <optional>
#include <string>
#include <vector>

#include "ualign/lemma_verify.hpp"
#include "ualign/moc.hpp"

namespace ualign {

enum class Regime { Subcritical, Critical, Supercritical };

const char* regime_name(Regime r);

struct SelectionInputs {
    double rho_lower = 0.0;   // uniform lower density bound
    double rho_upper = 0.0;   // uniform upper density bound
    double V0 = 0.0;          // initial velocity oscillation
    double F0_norm = 0.0;     // |F0|_inf
    double gradF0_norm = 0.0; // |grad F0|_inf
    double H0_norm = 0.0;     // |H0|_inf
    double c0 = 0.0;          // decay rate entering the time-integrated terms
    std::optional<double> sigma;     // supercritical only
    std::optional<double> u_Csigma;  // supercritical only
};

/** One negativity inequality, evaluated at the selected parameters. The
 * selection promises lhs <= rhs where rhs is half the available dissipation
 * budget (the >= 2x margin). */
struct InequalityCheck {
    std::string name;
    double lhs;
    double rhs;
    bool ok;
};

struct Selection {
    Regime regime;
    double alpha;
    double delta1;
    double delta2;
    double kappa;
    double mu;
    double log_lambda;
    MocPair pair;
    std::vector<InequalityCheck> checks;
};

/** Raised when no parameter choice closes the inequalities. */
class InfeasibleSelection : public std::runtime_error {
  public:
    InfeasibleSelection(std::string binding, const std::string& detail)
        : std::runtime_error(detail), binding_(std::move(binding)) {}
    const std::string& binding_inequality() const { return binding_; }

  private:
    std::string binding_;
};

/** Picks (delta1, delta2, kappa, lambda, mu) closing the regime's
 * negativity inequalities with >= 2x margin:
 *   Subcritical: mu = alpha/2, delta1 = delta2;
 *   Critical:    mu = 1/2, delta1 = kappa*delta2 with kappa small;
 *   Supercritical: mu = (sigma-(1-alpha))/2, lambda ~ u_Csigma^{-1/(sigma-(1-alpha))}.
 * lambda is additionally capped so that Xi_1, Xi_2 <= 1/2. Every inequality
 * is re-verified by direct substitution and returned in `checks`. */
Selection select_parameters(Regime regime, double alpha, const SelectionInputs& in,
                            const EmpiricalConstants& consts);

/** Re-evaluates the regime inequalities at explicit parameter values (the
 * closed verification loop; also used to re-check with a post-hoc rate). */
std::vector<InequalityCheck> verify_selection(Regime regime, double alpha,
                                              const SelectionInputs& in,
                                              const EmpiricalConstants& consts, double delta1,
                                              double delta2, double mu, double log_lambda);

} // namespace ualign

#endif
