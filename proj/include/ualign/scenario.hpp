#ifndef UALIGN_SCENARIO_HPP
#define UALIGN_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "ualign/diagnostics.hpp"
#include "ualign/param_select.hpp"
#include "ualign/solver.hpp"

namespace ualign {

enum class Scenario {
    Generic,
    GZero,
    FrozenBurgers,
    ShearFlock,
    CriticalDemo,
    SupercriticalCriterion,
};

const char* scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

struct InitialDataParams {
    double rho_mean = 1.0;
    double rho_amplitude = 0.3;
    double u_mean = 0.3;
    double u_amplitude = 0.5;
    int k_max = 3; // band limit of the random trigonometric data
};

struct MocSettings {
    bool enabled = false;
    double rho_headroom = 1.5; // margin on the density bounds fed to the selector
    double v0_headroom = 2.0;  // margin on the initial oscillation
    double c0_guess = 0.1;     // rate used in the selector; refitted post-run
};

struct ScenarioConfig {
    Scenario scenario = Scenario::Generic;
    int dim = 1;
    int n = 512;
    double length = 6.283185307179586476925286766559;
    SolverConfig solver;
    InitialDataParams initial;
    MocSettings moc;
    double sigma = 0.75; // Hoelder exponent tracked by the diagnostics
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    void validate() const;
};

/** Flat key-value config with [section] headers; unknown keys are an error
 * so typos cannot silently change a run. */
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
/** Full echo of a config (defaults included) for the run manifest. */
std::string config_to_json(const ScenarioConfig& cfg);

/** Seed-deterministic initial data per scenario; rejects vacuum. */
FlowState build_initial_data(const ScenarioConfig& cfg, GridPtr grid);

struct RunArtifacts {
    ScenarioConfig cfg;
    std::string output_dir;
    std::string status = "completed"; // completed | blowup | vacuum | moc_breakthrough
    double event_time = 0.0;
    std::string event_detail;
    std::vector<DiagnosticsRecord> records;
    std::vector<FlowState> snapshots;
    std::optional<Selection> moc_selection;
    std::optional<FlockReport> flocking;
    std::vector<Violation> violations;
    std::vector<InequalityCheck> posthoc_checks; // selector re-run with the fitted rate
};

/** Runs the scenario: time loop with stable_dt, periodic diagnostics and
 * snapshots, MOC scans against the selected pair, post-hoc flocking fit and
 * margin rescan with the fitted rate, persistence of manifest, snapshots,
 * diagnostics CSV and events log. */
RunArtifacts run(const ScenarioConfig& cfg);

/** Writes the report bundle (report.json, flocking.csv, moc_margins.csv)
 * into the run directory. */
void report(const RunArtifacts& artifacts);

/** Rebuilds artifacts from a persisted run directory and re-emits the
 * report; throws listing any absent files. */
RunArtifacts load_run(const std::string& run_dir);

} // namespace ualign

#endif
