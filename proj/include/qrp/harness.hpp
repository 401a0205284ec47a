#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrp/analysis.hpp"
#include "qrp/config.hpp"
#include "qrp/observables.hpp"

namespace qrp {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Output layout under the experiment's output directory:
//   manifest.json
//   sweep.csv
//   point_000/{observables.bin, r2grid.bin, heatmap.csv, entropy.csv}
//   point_001/...
namespace layout {
inline constexpr std::string_view kManifest = "manifest.json";
inline constexpr std::string_view kSweepTable = "sweep.csv";
inline constexpr std::string_view kObservables = "observables.bin";
inline constexpr std::string_view kR2Grid = "r2grid.bin";
inline constexpr std::string_view kHeatmap = "heatmap.csv";
inline constexpr std::string_view kEntropy = "entropy.csv";
std::string point_dir(std::size_t index);
} // namespace layout

struct PointResult {
    double value = 0.0;
    ModelSpec model;
    InputBatch batch;
    ObservableGrid observables;
    R2Grid r2;
    EntropySeries entropy;
    double r2_mean = 0.0;
};

// Steps (i)-(iv) for one value of the sweep parameter.
PointResult run_point(const ExperimentConfig& config, double value);

// Writes observables.bin, r2grid.bin, heatmap.csv and entropy.csv into `dir`,
// each atomically. Returns file name -> SHA-256.
std::map<std::string, std::string> write_point(const std::filesystem::path& dir, const PointResult& point);

// heatmap.csv plus the binary r2grid.bin alongside it.
void export_heatmap(const R2Grid& grid, const std::filesystem::path& dir);

struct PointRecord {
    std::size_t index = 0;
    double value = 0.0;
    bool ok = false;
    std::string error;
    std::string dir; // relative to the output directory
    std::map<std::string, std::string> files; // name -> sha256
    double r2_mean = 0.0;
    bool resumed = false;
};

struct RunManifest {
    std::string config_fingerprint;
    std::string tool_version;
    std::string prng;
    std::string started;
    std::string finished;
    std::string parameter;
    std::vector<PointRecord> points;
    std::map<std::string, std::string> files; // top-level artifacts, name -> sha256
    std::optional<Dip> dip;

    std::string to_json() const;
    static RunManifest parse(const std::string& text);
};

struct SweepOutcome {
    SweepResult sweep; // successful points only, in config order
    std::optional<Dip> dip;
    RunManifest manifest;
    bool partial_failure = false;
};

struct RunOptions {
    bool resume = false;
    std::function<void(std::string_view)> log;
};

// Runs every sweep point, then the subset average and dip search, and
// persists all artifacts under config.output. With resume set, points whose
// artifacts already match a manifest with the same config fingerprint are
// loaded instead of recomputed. Failed points are recorded and skipped.
SweepOutcome run_sweep(const ExperimentConfig& config, const RunOptions& options = {});

// Re-emits the tables of a finished run from its binaries. With a threshold,
// the R2 grids are rebuilt from observables.bin at that threshold and written
// as heatmap_th<threshold>.csv / sweep_th<threshold>.csv instead.
SweepOutcome export_run(const ExperimentConfig& config, std::optional<double> threshold = std::nullopt);

// Every file the manifest names exists and hashes to its recorded digest.
bool verify_manifest(const std::filesystem::path& output_dir);

} // namespace qrp
