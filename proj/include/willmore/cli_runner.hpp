#pragma once

// Experiment configuration and the harnesses that produce the reference
// experiment outputs (convergence tables, energy histories, iteration
// profiles, evolution snapshots, identity-check reports) as CSV/JSON files.

#include "willmore/metrics.hpp"

#include <map>
#include <vector>

namespace willmore {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

enum class ExperimentKind {
    Evolve,
    ConvergenceCircle,
    ConvergenceManifold,
    EnergySweep,
    IterationProfile,
    IdentityCheck,
};

std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Evolve;
    std::string preset = "circle";
    int N = 0;                      // evolve node count (0 -> derive from h)
    std::vector<double> h_list;     // convergence sweeps
    double tau = 0.0;               // explicit time step (0 -> rule)
    std::vector<double> tau_list;   // energy sweep
    bool tau_rule_h2_over_2 = false;
    double T_final = 1.0;
    double tol = kDefaultNewtonTol;
    int stride = 10;                // snapshot stride for evolve
    int ref_N = 512;                // reference mesh (h_e = 2^{-9})
    std::string cache_dir = "ref_cache";
    std::string out_dir = "out";
    PresetParams params{};

    // Stable content hash of the validated configuration; names the output
    // subdirectory and is embedded in every emitted CSV.
    std::string hash() const;
};

// Flat key-value config file ("key = value", '#' comments), plus
// "key=value" override strings. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& path,
                              const std::vector<std::string>& overrides = {});
ExperimentConfig config_from_pairs(const std::map<std::string, std::string>& pairs);

struct RunRecord {
    std::string out_dir;  // <out>/<config-hash>
    std::vector<std::string> files;
    std::string summary;
};

RunRecord run_experiment(const ExperimentConfig& config, int jobs = 1);

}  // namespace willmore
