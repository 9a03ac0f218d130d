#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "shelab/config.hpp"
#include "shelab/ensemble.hpp"
#include "shelab/functionals.hpp"

namespace shelab {

/// Command-line overrides and output controls shared by all entry points.
struct RunOptions {
    long long paths_override = -1;
    long long seed_override = -1;
    int threads_override = -1;
    double tolerance_scale = 1.0;
    bool dump_fields = false;
    std::string out_dir; // empty = no artifacts written
};

/// Fully resolved experiment scenario.
struct Scenario {
    GridPtr grid;
    TimeGrid time_grid;
    SolverConfig solver;
    InitialProfile u0_fn;
    Field u0;
    CoefficientSpec coeffs;
    CoefficientBounds bounds;
    std::vector<double> checkpoints;
    double gamma = 0.0;
    double assumption_eps = 0.5;
    int paths = 1;
    std::uint64_t master_seed = 0;
    int threads = 0;
    double tolerance_scale = 1.0;
    std::string name;
    Config raw;
};

/// Validating loader: schema-checks every key, builds the grid/time/solver
/// objects, estimates coefficient bounds, and runs the boundary-integrand
/// guard (weighted integrand of u0 at the boundary must stay below 1e-14 of
/// its peak for the scenario's quadratic weight, unless waived).
Scenario resolve_scenario(const Config& cfg, const RunOptions& opt);

struct CheckReport {
    std::string id;
    Verdict verdict = Verdict::Fail;
    std::string summary;
    nlohmann::json details;
    std::vector<std::string> artifacts;
};

const std::vector<std::string>& known_check_ids();

/// Run one named verification and (when out_dir is set) write its artifacts
/// plus a run manifest.
CheckReport verify(const Config& cfg, const std::string& check_id, const RunOptions& opt);

/// Plain ensemble run: writes the gamma-weight functional series CSV (and
/// optionally per-checkpoint field dumps for path 0) plus the manifest.
CheckReport simulate(const Config& cfg, const RunOptions& opt);

/// Convenience used by the CLI `report` subcommand: every check listed under
/// run.checks.
std::vector<CheckReport> run_report(const Config& cfg, const RunOptions& opt);

/// Map verdicts to the process exit code (0 pass, 1 fail, 2 inconclusive).
int exit_code(const std::vector<Verdict>& verdicts);

std::string code_version();

} // namespace shelab
