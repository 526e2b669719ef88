#pragma once

#include <cstdint>
#include <string>

namespace sdl {

/// Named experiment runs.  Zero/empty values mean "use the experiment's
/// default"; apply_config_entry maps flat key=value pairs (config file or
/// CLI) onto the fields and rejects unknown keys with config_error.
struct ExperimentConfig {
    std::string experiment;
    int resolution = 0;
    double t = 1.0;
    double alpha = 0.0;
    std::uint64_t seed = 1;
    std::string out_dir = ".";

    int n = 3;                 // homogeneous: su(n)
    std::string pi0;           // simple-root subsets, e.g. "a2" or "a1,a2"
    std::string pi0p = "a1";
    double alpha_lo = 0.5;     // threshold bracket
    double alpha_hi = 2.0;
    int degree = 1;            // surface2d winding degree
    int map_count = 100;       // bound_sweep sample size
    double amplitude = 0.05;   // flow perturbation amplitude
};

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Exit codes of run_experiment (and the CLI).
inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertionFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;

/// Runs one experiment and writes results.json, manifest.json and (for flow
/// experiments) trajectory.csv into cfg.out_dir.  Configuration problems and
/// numerical failures are reported through the exit code; in-run assertion
/// failures are recorded in results.json and yield kExitAssertionFailure.
int run_experiment(const ExperimentConfig& cfg);

} // namespace sdl
