// qrp: local-quench reservoir probing of spin-chain phase transitions.
//
//   qrp validate --config exp.json
//   qrp run      --config exp.json [--workers N] [--output DIR] [--resume] [--seed-override S]
//   qrp point    --config exp.json --value V
//   qrp export   --config exp.json [--threshold D]
//
// Exit codes: 0 success, 2 invalid config, 3 partial sweep failure,
// 4 engine failure, 1 anything else (I/O).

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qrp/config.hpp"
#include "qrp/error.hpp"
#include "qrp/grid_io.hpp"
#include "qrp/harness.hpp"
#include "qrp/kernels.hpp"

namespace {

enum Exit : int { kOk = 0, kOther = 1, kConfigInvalid = 2, kPartialFailure = 3, kEngineFailure = 4 };

struct Globals {
    std::string config_path;
    int workers = 0;
    std::string output;
    bool resume = false;
    std::optional<std::uint64_t> seed_override;
};

qrp::ExperimentConfig load(const Globals& g)
{
    auto cfg = qrp::ExperimentConfig::load(g.config_path);
    if (!g.output.empty()) cfg.output = g.output;
    if (g.seed_override) cfg.seed = *g.seed_override;
    cfg.validate();
    return cfg;
}

void print_sweep(const qrp::SweepOutcome& out)
{
    std::printf("%-12s %-12s %s\n", out.sweep.parameter.c_str(), "r2_mean", "");
    for (std::size_t j = 0; j < out.sweep.values.size(); ++j)
        std::printf("%-12.6g %-12.6f %s\n", out.sweep.values[j], out.sweep.r2_mean[j],
                    out.dip && out.dip->index == j ? "<- dip" : "");
    if (out.dip && !out.dip->interior) std::printf("minimum at an endpoint: no interior dip\n");
    for (const auto& p : out.manifest.points)
        if (!p.ok) std::printf("point %zu (%g) failed: %s\n", p.index, p.value, p.error.c_str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Local-quench reservoir probing of quantum spin chains"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", g.config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--output", g.output, "output directory (overrides the config)");
        sub->add_option("--seed-override", seed, "replace the input-batch seed");
    };

    auto* validate = app.add_subcommand("validate", "check a config and print its fingerprint");
    add_common(validate);
    auto* run = app.add_subcommand("run", "run the full parameter sweep");
    add_common(run);
    run->add_flag("--resume", g.resume, "reuse completed points of a previous run");
    auto* point = app.add_subcommand("point", "run a single parameter value");
    add_common(point);
    double point_value = 0.0;
    point->add_option("--value", point_value, "sweep-parameter value")->required();
    auto* exp = app.add_subcommand("export", "re-emit tables from stored binaries");
    add_common(exp);
    std::optional<double> threshold;
    exp->add_option("--threshold", threshold, "rebuild R2 grids at this deviation threshold");

    CLI11_PARSE(app, argc, argv);
    for (auto* sub : {validate, run, point, exp})
        if (sub->parsed() && sub->count("--seed-override")) g.seed_override = seed;

    qrp::ExperimentConfig cfg;
    try {
        cfg = load(g);
    } catch (const qrp::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kConfigInvalid;
    }
    if (g.workers > 0) qrp::kernels::set_threads(g.workers);

    try {
        if (validate->parsed()) {
            std::printf("config ok\nfingerprint %s\n", cfg.fingerprint().c_str());
            return kOk;
        }
        if (run->parsed()) {
            qrp::RunOptions opt;
            opt.resume = g.resume;
            opt.log = [](std::string_view msg) { std::cerr << msg << "\n"; };
            const auto out = qrp::run_sweep(cfg, opt);
            print_sweep(out);
            if (out.sweep.values.empty()) return kEngineFailure;
            return out.partial_failure ? kPartialFailure : kOk;
        }
        if (point->parsed()) {
            const auto p = qrp::run_point(cfg, point_value);
            const std::filesystem::path dir = std::filesystem::path(cfg.output) / "point";
            qrp::write_point(dir, p);
            std::printf("%s=%g r2_mean=%.9g (artifacts in %s)\n", cfg.sweep.parameter.c_str(), point_value, p.r2_mean,
                        dir.c_str());
            return kOk;
        }
        if (exp->parsed()) {
            print_sweep(qrp::export_run(cfg, threshold));
            return kOk;
        }
    } catch (const qrp::EngineError& e) {
        std::cerr << "engine failure: " << e.what() << "\n";
        return kEngineFailure;
    } catch (const qrp::InvalidArgument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kConfigInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
    return kOther;
}
