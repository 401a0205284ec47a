#include "qrp/harness.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>

#include <json.hpp>

#include "qrp/error.hpp"
#include "qrp/grid_io.hpp"
#include "qrp/quench.hpp"

namespace qrp {

namespace fs = std::filesystem;
using nlohmann::json;

std::string layout::point_dir(std::size_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "point_%03zu", index);
    return buf;
}

namespace {

std::string utc_now()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string shortest(double v)
{
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

void log(const RunOptions& opt, const std::string& msg)
{
    if (opt.log) opt.log(msg);
}

// Files of a previously completed point still match their recorded digests.
bool point_intact(const fs::path& out, const PointRecord& rec)
{
    if (!rec.ok || rec.files.empty()) return false;
    for (const auto& [name, digest] : rec.files) {
        const fs::path p = out / rec.dir / name;
        if (!fs::exists(p) || io::sha256_file(p) != digest) return false;
    }
    return true;
}

SweepResult collect(const std::string& parameter, const std::vector<PointRecord>& points)
{
    SweepResult sweep;
    sweep.parameter = parameter;
    for (const auto& p : points) {
        if (!p.ok) continue;
        sweep.values.push_back(p.value);
        sweep.r2_mean.push_back(p.r2_mean);
    }
    return sweep;
}

std::string sweep_table(const SweepResult& sweep, const std::optional<Dip>& dip)
{
    if (dip) return io::sweep_csv(sweep, *dip);
    return sweep.parameter + ",r2_mean,dip\n";
}

} // namespace

PointResult run_point(const ExperimentConfig& config, double value)
{
    PointResult p;
    p.value = value;
    p.model = with_parameter(config.model, config.sweep.parameter, value);
    p.batch = sample_inputs(config.seed, config.n_train, config.n_test);
    EngineParams engine = config.engine;
    engine.t_max = config.record.t_max;
    p.observables = record_trajectory(p.batch.values, p.model, config.quench, engine, config.record);
    p.r2 = build_r2_grid(p.observables, p.batch, config.threshold);
    p.entropy = record_entropy(config.entropy_input, config.resolved_entropy_cut(), p.model, config.quench, engine,
                               config.record);
    p.r2_mean = mean_r2(p.r2, config.subset);
    return p;
}

std::map<std::string, std::string> write_point(const fs::path& dir, const PointResult& point)
{
    const std::pair<std::string_view, std::string> files[] = {
        {layout::kObservables, io::encode_observables(point.observables, point.batch)},
        {layout::kR2Grid, io::encode_r2_grid(point.r2)},
        {layout::kHeatmap, io::heatmap_csv(point.r2)},
        {layout::kEntropy, io::entropy_csv(point.entropy)},
    };
    std::map<std::string, std::string> digests;
    for (const auto& [name, bytes] : files) {
        io::write_atomic(dir / name, bytes);
        digests[std::string(name)] = io::sha256_hex(bytes);
    }
    return digests;
}

void export_heatmap(const R2Grid& grid, const fs::path& dir)
{
    io::write_atomic(dir / layout::kHeatmap, io::heatmap_csv(grid));
    io::write_atomic(dir / layout::kR2Grid, io::encode_r2_grid(grid));
}

// ---------------------------------------------------------------------------

std::string RunManifest::to_json() const
{
    json pts = json::array();
    for (const auto& p : points) {
        json j = {{"index", p.index}, {"value", p.value}, {"status", p.ok ? "ok" : "failed"},
                  {"dir", p.dir},     {"files", p.files}, {"resumed", p.resumed}};
        if (p.ok) j["r2_mean"] = p.r2_mean;
        else j["error"] = p.error;
        pts.push_back(std::move(j));
    }
    json j = {{"config_fingerprint", config_fingerprint},
              {"tool_version", tool_version},
              {"prng", prng},
              {"started", started},
              {"finished", finished},
              {"parameter", parameter},
              {"points", pts},
              {"files", files}};
    if (dip)
        j["dip"] = {{"index", dip->index}, {"value", dip->value}, {"r2_mean", dip->r2_mean},
                    {"interior", dip->interior}};
    else
        j["dip"] = nullptr;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::parse(const std::string& text)
{
    try {
        const json j = json::parse(text);
        RunManifest m;
        m.config_fingerprint = j.at("config_fingerprint").get<std::string>();
        m.tool_version = j.at("tool_version").get<std::string>();
        m.prng = j.at("prng").get<std::string>();
        m.started = j.at("started").get<std::string>();
        m.finished = j.at("finished").get<std::string>();
        m.parameter = j.at("parameter").get<std::string>();
        m.files = j.at("files").get<std::map<std::string, std::string>>();
        for (const auto& p : j.at("points")) {
            PointRecord r;
            r.index = p.at("index").get<std::size_t>();
            r.value = p.at("value").get<double>();
            r.ok = p.at("status").get<std::string>() == "ok";
            r.dir = p.at("dir").get<std::string>();
            r.files = p.at("files").get<std::map<std::string, std::string>>();
            r.resumed = p.value("resumed", false);
            if (r.ok) r.r2_mean = p.at("r2_mean").get<double>();
            else r.error = p.value("error", "");
            m.points.push_back(std::move(r));
        }
        if (!j.at("dip").is_null()) {
            const auto& d = j.at("dip");
            m.dip = Dip{d.at("index").get<std::size_t>(), d.at("value").get<double>(), d.at("r2_mean").get<double>(),
                        d.at("interior").get<bool>()};
        }
        return m;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

SweepOutcome run_sweep(const ExperimentConfig& config, const RunOptions& options)
{
    config.validate();
    const fs::path out = config.output;
    fs::create_directories(out);
    const fs::path manifest_path = out / layout::kManifest;

    std::optional<RunManifest> previous;
    if (options.resume && fs::exists(manifest_path)) {
        RunManifest prev = RunManifest::parse(io::read_file(manifest_path));
        if (prev.config_fingerprint == config.fingerprint()) previous = std::move(prev);
        else log(options, "existing manifest has a different config fingerprint; recomputing every point");
    }

    SweepOutcome outcome;
    RunManifest& m = outcome.manifest;
    m.config_fingerprint = config.fingerprint();
    m.tool_version = std::string(kToolVersion);
    m.prng = std::string(kInputPrng);
    m.started = utc_now();
    m.parameter = config.sweep.parameter;

    for (std::size_t j = 0; j < config.sweep.values.size(); ++j) {
        const double value = config.sweep.values[j];
        PointRecord rec;
        rec.index = j;
        rec.value = value;
        rec.dir = layout::point_dir(j);

        const PointRecord* done = nullptr;
        if (previous)
            for (const auto& p : previous->points)
                if (p.index == j && p.value == value && point_intact(out, p)) done = &p;

        if (done) {
            const R2Grid grid = io::decode_r2_grid(io::read_file(out / rec.dir / layout::kR2Grid));
            rec = *done;
            rec.r2_mean = mean_r2(grid, config.subset);
            rec.resumed = true;
            log(options, config.sweep.parameter + "=" + shortest(value) + ": resumed");
        } else {
            try {
                const PointResult p = run_point(config, value);
                rec.files = write_point(out / rec.dir, p);
                rec.r2_mean = p.r2_mean;
                rec.ok = true;
                log(options, config.sweep.parameter + "=" + shortest(value) + ": r2_mean " + shortest(p.r2_mean));
            } catch (const EngineError& e) {
                rec.ok = false;
                rec.error = e.what();
                outcome.partial_failure = true;
                log(options, config.sweep.parameter + "=" + shortest(value) + ": FAILED " + e.what());
            }
        }
        m.points.push_back(std::move(rec));
        io::write_atomic(manifest_path, m.to_json());
    }

    outcome.sweep = collect(config.sweep.parameter, m.points);
    if (!outcome.sweep.values.empty()) outcome.dip = locate_dip(outcome.sweep);
    m.dip = outcome.dip;

    const std::string table = sweep_table(outcome.sweep, outcome.dip);
    io::write_atomic(out / layout::kSweepTable, table);
    m.files[std::string(layout::kSweepTable)] = io::sha256_hex(table);
    m.finished = utc_now();
    io::write_atomic(manifest_path, m.to_json());
    return outcome;
}

SweepOutcome export_run(const ExperimentConfig& config, std::optional<double> threshold)
{
    const fs::path out = config.output;
    SweepOutcome outcome;
    outcome.manifest = RunManifest::parse(io::read_file(out / layout::kManifest));
    auto& m = outcome.manifest;
    const std::string suffix = threshold ? "_th" + shortest(*threshold) : "";

    for (auto& rec : m.points) {
        if (!rec.ok) continue;
        const fs::path dir = out / rec.dir;
        R2Grid grid;
        if (threshold) {
            const auto stored = io::decode_observables(io::read_file(dir / layout::kObservables));
            grid = build_r2_grid(stored.grid, stored.batch, *threshold);
        } else {
            grid = io::decode_r2_grid(io::read_file(dir / layout::kR2Grid));
        }
        io::write_atomic(dir / ("heatmap" + suffix + ".csv"), io::heatmap_csv(grid));
        rec.r2_mean = mean_r2(grid, config.subset);
    }
    outcome.sweep = collect(m.parameter, m.points);
    if (!outcome.sweep.values.empty()) outcome.dip = locate_dip(outcome.sweep);
    io::write_atomic(out / ("sweep" + suffix + ".csv"), sweep_table(outcome.sweep, outcome.dip));
    outcome.partial_failure = outcome.sweep.values.size() != m.points.size();
    return outcome;
}

bool verify_manifest(const fs::path& output_dir)
{
    const RunManifest m = RunManifest::parse(io::read_file(output_dir / layout::kManifest));
    for (const auto& [name, digest] : m.files) {
        const fs::path p = output_dir / name;
        if (!fs::exists(p) || io::sha256_file(p) != digest) return false;
    }
    for (const auto& rec : m.points)
        for (const auto& [name, digest] : rec.files) {
            const fs::path p = output_dir / rec.dir / name;
            if (!fs::exists(p) || io::sha256_file(p) != digest) return false;
        }
    return true;
}

} // namespace qrp
