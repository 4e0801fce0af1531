#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "radarcomm/params.hpp"

namespace radarcomm::cli {

inline constexpr const char* kToolVersion = "1.0.0";

/// Resolved experiment description. Values are in CLI-facing units (dBm,
/// GHz, degrees); conversion to internal units happens in scenario_params.
/// Optionals and empty lists mean "use the subcommand default".
struct ExperimentConfig {
    std::string subcommand;

    // scenario
    double pt_dbm = 10.0;
    double freq_ghz = 60.0;
    double phi_deg = 30.0;
    double alpha = 4.0;
    double sigma = 10.0;
    int mr = 100;
    std::optional<int> m;       // explicit cycle length wins over eps mapping
    std::vector<double> eps;    // requested duty fractions
    std::vector<double> qc;     // persistency values
    double gamma = 5.0;
    double dc = 5.0;
    double pf = 0.1;

    // sweep axis
    double lambda = 1e-4;
    std::optional<double> lambda_min;
    std::optional<double> lambda_max;
    std::optional<int> points;
    std::string axis = "lambda";  // sweep subcommand: lambda|qc|eps|phi_deg|sigma|gamma|dc|pf|pt_dbm|freq_ghz
    std::optional<double> axis_min;
    std::optional<double> axis_max;
    std::string spacing = "log";  // log|linear
    std::vector<double> dmin;     // fig5 range constraints [m]
    std::string quantity = "all"; // analytic: radar|throughput|all

    // simulation controls
    long long trials = 0;         // 0 = subcommand default
    double window_radius = 0.0;   // 0 = auto
    std::uint64_t seed = 1;
    int threads = 0;              // 0 = hardware concurrency

    std::string out = "out";
};

/// Set one key from the flat `key = value` grammar shared by config files
/// and manifests. Lists use comma-separated values. Unknown keys and
/// malformed values raise ConfigError naming the key.
void apply_key(ExperimentConfig& config, const std::string& key,
               const std::string& value);

/// Loads a UTF-8 config file: one `key = value` per line, `#` comments.
void load_config_file(ExperimentConfig& config, const std::string& path);

/// Fill in the subcommand defaults (axis ranges, grids, trial counts) so the
/// emitted manifest pins every value a rerun needs.
ExperimentConfig resolve_defaults(const ExperimentConfig& config);

/// Manifest body: the resolved configuration plus the tool version, written
/// in the config-file grammar so it can be fed back through --config.
std::string manifest_text(const ExperimentConfig& config);

/// Validated scenario for one (eps, q_c) choice. Requested eps maps to
/// m = round(mr/eps) unless an explicit m was configured.
SystemParams scenario_params(const ExperimentConfig& config,
                             double eps_requested, double q_c);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// Sweep axis values (inclusive endpoints; a single point collapses to min).
std::vector<double> axis_values(double min, double max, int points, bool log_spacing);

struct RunResult {
    int exit_code = 0;
    std::vector<std::string> files;  // everything written, manifest included
};

/// Executes config.subcommand, writing CSVs, a manifest, and a plot script
/// into config.out. Exit codes: 0 success, 2 config error, 3 infeasible
/// constraint, 4 numerical failure.
RunResult run(const ExperimentConfig& config);

/// Like run(), but maps library errors onto the exit-code conventions
/// instead of propagating them; diagnostics go to stderr.
int run_checked(const ExperimentConfig& config);

}  // namespace radarcomm::cli
