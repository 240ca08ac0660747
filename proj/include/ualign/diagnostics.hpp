#ifndef UALIGN_DIAGNOSTICS_HPP
#define UALIGN_DIAGNOSTICS_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ualign/moc.hpp"
#include "ualign/solver.hpp"

namespace ualign {

struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double momentum = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
    double F_sup = 0.0;
    double G_sup = 0.0;
    double V = 0.0; // max u - min u
    double lip_rho = 0.0;
    double lip_u = 0.0;
    double holder_u_sigma = 0.0;
    double moc_margin_rho = std::numeric_limits<double>::quiet_NaN();
    double moc_margin_u = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> events;
};

/** All monitors for one state; MOC margins are scanned when a pair is
 * given (u against exp(-c0 t) omega2 with the pair's rate). */
DiagnosticsRecord record(const FlowState& state, const AuxiliaryFields& aux,
                         const MocPair* pair, double sigma, const ShiftSet& shifts);

struct Violation {
    std::string name;
    double t;
    std::string detail;
};

/** Flags every a-priori bound breach across a recorded series: mass and
 * momentum drift, the F and G maximum principles, V(t) growth, and a
 * density-floor collapse below half the floor seen over the first time
 * unit. */
std::vector<Violation> check_apriori(const std::vector<DiagnosticsRecord>& series,
                                     const DiagnosticsRecord& initial);

struct FlockReport {
    double u_bar = 0.0;
    double decay_rate_fit = 0.0;
    double r_squared = 0.0;
    double beta = 0.5;
    std::string status; // fitted | inconclusive
    std::vector<double> times;
    std::vector<double> u_dev_sup;        // |u(t)-u_bar|_inf
    std::vector<double> profile_residual; // C^beta distance to the shifted final profile
};

/** Fits the flocking decay rate from log|u - u_bar|_inf over the final half
 * of the snapshots and computes the traveling-profile residual by phase
 * shifting rho into the u_bar frame. Needs >= 3 e-foldings of V decay to
 * report "fitted". */
FlockReport fit_flocking(const std::vector<DiagnosticsRecord>& series,
                         const std::vector<FlowState>& snapshots, double beta = 0.5);

/** CSV (one row per record); columns documented in the header line. */
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& series);
std::vector<DiagnosticsRecord> parse_diagnostics_csv(const std::string& csv);

} // namespace ualign

#endif
