#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qrp/analysis.hpp"
#include "qrp/engine.hpp"
#include "qrp/model.hpp"
#include "qrp/observables.hpp"
#include "qrp/quench.hpp"

namespace qrp {

struct SweepAxis {
    std::string parameter;
    std::vector<double> values;
};

// One experiment = one JSON file = one output directory.
//
//   {
//     "model":      {"variant": "tfim", "n_sites": 13, "couplings": {"J": 1, "g": 1}},
//     "sweep":      {"parameter": "g", "values": [0.6, 0.8, 1.0, 1.2, 1.4]},
//     "quench":     {"background": "all_up", "encoding": "x_basis"},
//     "engine":     {"dt": 0.005, "krylov_dim": 20, "krylov_tol": 1e-12, "max_sites": 22},
//     "batch":      {"seed": 7, "n_train": 64, "n_test": 64},
//     "observable": {"axis": "x", "dt_record": 0.05, "t_max": 5, "propagation": "superposition"},
//     "analysis":   {"threshold": 1e-5, "window_sites": 9, "t_lo": 0, "t_hi": 5, "include_t_lo": false},
//     "entropy":    {"cut": 6, "input": 0.5},
//     "output":     "runs/tfim"
//   }
//
// Only "model" and "sweep" are required. Unknown keys are rejected.
struct ExperimentConfig {
    ModelSpec model;
    SweepAxis sweep;
    QuenchConfig quench;
    EngineParams engine;
    std::uint64_t seed = 7;
    int n_train = 64;
    int n_test = 64;
    RecordSpec record;
    SubsetSpec subset;
    double threshold = kDefaultThreshold;
    int entropy_cut = 0; // 0 selects the half-chain cut n_sites / 2
    double entropy_input = 0.5;
    std::string output = "qrp_out";

    // Throws ConfigError.
    static ExperimentConfig parse(const std::string& json_text);
    static ExperimentConfig load(const std::filesystem::path& path);

    std::string to_json() const;
    // SHA-256 of the canonical JSON with the output directory left out.
    std::string fingerprint() const;
    // Cross-checks every field against the module invariants; throws ConfigError.
    void validate() const;

    int resolved_entropy_cut() const { return entropy_cut > 0 ? entropy_cut : model.n_sites / 2; }
};

} // namespace qrp
