#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "qrp/config.hpp"
#include "qrp/error.hpp"
#include "qrp/grid_io.hpp"
#include "qrp/harness.hpp"

using namespace qrp;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"({
  "model": {"variant": "tfim", "n_sites": 7, "couplings": {"J": 1, "g": 1}},
  "sweep": {"parameter": "g", "values": [0.5, 1.0, 1.5]},
  "batch": {"seed": 3, "n_train": 8, "n_test": 8},
  "observable": {"axis": "x", "dt_record": 0.1, "t_max": 1.0},
  "analysis": {"window_sites": 5}
})";

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("qrp_test_harness_" + name);
    fs::remove_all(p);
    return p;
}

ExperimentConfig small_config(const fs::path& out)
{
    auto cfg = ExperimentConfig::parse(kSmall);
    cfg.output = out.string();
    return cfg;
}

std::size_t count_lines(const std::string& s)
{
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

} // namespace

TEST_CASE("config parsing and defaults")
{
    const auto cfg = ExperimentConfig::parse(kSmall);
    CHECK(cfg.model.variant() == Variant::tfim);
    CHECK(cfg.model.n_sites == 7);
    CHECK(cfg.sweep.values.size() == 3);
    CHECK(cfg.record.t_max == 1.0);
    CHECK(cfg.subset.t_hi == 1.0);
    CHECK(cfg.subset.n_sites == 5);
    CHECK(cfg.threshold == kDefaultThreshold);
    CHECK(cfg.resolved_entropy_cut() == 3);
    CHECK_NOTHROW(cfg.validate());

    const auto again = ExperimentConfig::parse(cfg.to_json());
    CHECK(again.fingerprint() == cfg.fingerprint());
    auto moved = cfg;
    moved.output = "elsewhere";
    CHECK(moved.fingerprint() == cfg.fingerprint());
    auto reseeded = cfg;
    reseeded.seed = 4;
    CHECK(reseeded.fingerprint() != cfg.fingerprint());
}

TEST_CASE("invalid configs are rejected")
{
    auto bad = [](const std::string& patch_from, const std::string& patch_to) {
        std::string text = kSmall;
        const auto pos = text.find(patch_from);
        REQUIRE(pos != std::string::npos);
        text.replace(pos, patch_from.size(), patch_to);
        return text;
    };
    auto rejects = [](const std::string& text) {
        try {
            ExperimentConfig::parse(text).validate();
        } catch (const ConfigError&) {
            return true;
        }
        return false;
    };
    CHECK(rejects("{"));
    CHECK(rejects(bad(R"("window_sites": 5)", R"("window_sites": 5, "t_hi": 2.0)")));
    CHECK(rejects(bad(R"("window_sites": 5)", R"("window_sites": 9)")));
    CHECK(rejects(bad(R"("window_sites": 5)", R"("window_sites": 4)")));
    CHECK(rejects(bad(R"("window_sites": 5)", R"("window_sites": 5, "t_lo": 1.0)")));
    CHECK(rejects(bad(R"("n_sites": 7)", R"("n_sites": 8)")));
    CHECK(rejects(bad(R"("variant": "tfim")", R"("variant": "ising")")));
    CHECK(rejects(bad(R"("parameter": "g")", R"("parameter": "kappa")")));
    CHECK(rejects(bad("[0.5, 1.0, 1.5]", "[]")));
    CHECK(rejects(bad(R"("axis": "x")", R"("axis": "w")")));
    CHECK(rejects(bad(R"("t_max": 1.0)", R"("t_max": 1.03)")));
    CHECK(rejects(bad(R"("n_train": 8)", R"("n_train": 1)")));
    CHECK(rejects(bad(R"("seed": 3)", R"("seed": 3, "colour": "red")")));
    CHECK(rejects(bad(R"("analysis": {)", R"("analysis": {"thresh": 1, )")));
}

TEST_CASE("heatmap and sweep tables")
{
    R2Grid g;
    g.n_sites = 3;
    g.times = {0.0, 0.5};
    g.r2 = {0.1, 0.2, 0.3, 0.4, 0.5, 1.0 / 3};
    g.delta = {1e-7, 0.1, 0.2, 0.3, 0.4, 0.5};
    g.zeroed = {1, 0, 0, 0, 0, 0};
    const auto csv = io::heatmap_csv(g);
    CHECK(count_lines(csv) == 7);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "site_offset,time,r2,delta,masked");
    std::getline(in, line);
    CHECK(line == "-1,0,0.1,1e-07,1");
    for (int k = 0; k < 5; ++k) std::getline(in, line);
    CHECK(line == "1,0.5,0.333333333,0.5,0");

    const auto sweep = io::sweep_csv({"g", {0.5, 1.0}, {0.7, 0.25}}, Dip{1, 1.0, 0.25, false});
    CHECK(sweep == "g,r2_mean,dip\n0.5,0.7,0\n1,0.25,1\n");

    const EntropySeries e{2, {0.0, 0.05}, {0.0, 0.125}};
    CHECK(io::entropy_csv(e) == "time,entropy\n0,0\n0.05,0.125\n");
}

TEST_CASE("binary formats round-trip bit-exactly")
{
    R2Grid g;
    g.n_sites = 2;
    g.times = {0.0, 0.1, 0.30000000000000004};
    g.threshold = 1e-5;
    g.r2 = {0.1, 1.0 / 3, 2.0 / 7, 0.0, 1e-300, 0.999999999999};
    g.delta = {0, 1, 2, 3, 4, 5};
    g.zeroed = {1, 0, 1, 0, 0, 1};
    const auto bytes = io::encode_r2_grid(g);
    const auto back = io::decode_r2_grid(bytes);
    CHECK(back.n_sites == 2);
    CHECK(back.times == g.times);
    CHECK(back.r2 == g.r2);
    CHECK(back.delta == g.delta);
    CHECK(back.zeroed == g.zeroed);
    CHECK(back.threshold == g.threshold);
    CHECK(io::encode_r2_grid(back) == bytes);
    CHECK_THROWS_AS(io::decode_r2_grid(bytes.substr(0, bytes.size() - 1)), IoError);
    CHECK_THROWS_AS(io::decode_r2_grid("garbage!" + bytes.substr(8)), IoError);

    const auto batch = sample_inputs(5, 2, 2);
    ObservableGrid o;
    o.n_instances = 4;
    o.n_sites = 3;
    o.axis = Axis::y;
    o.times = {0.0, 0.5};
    for (int j = 0; j < 24; ++j) o.values.push_back(std::sin(j * 1.1));
    o.meta = "synthetic";
    const auto ob = io::encode_observables(o, batch);
    const auto st = io::decode_observables(ob);
    CHECK(st.grid.values == o.values);
    CHECK(st.grid.axis == Axis::y);
    CHECK(st.grid.meta == "synthetic");
    CHECK(st.batch.values == batch.values);
    CHECK(st.batch.seed == 5);
    CHECK(st.batch.n_train == 2);
    CHECK(io::encode_observables(st.grid, st.batch) == ob);
}

TEST_CASE("single point pipeline")
{
    auto cfg = small_config(scratch("point"));
    const auto p = run_point(cfg, 1.0);
    CHECK(p.observables.n_instances == 16);
    CHECK(p.r2.n_sites == 7);
    CHECK(p.r2.n_times() == 11);
    for (double r : p.r2.r2) {
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
    }
    // at t = 0 only the central site depends on the input
    for (int i = 0; i < 7; ++i) CHECK(p.r2.zeroed[p.r2.index(i, 0)] == (i == 3 ? 0 : 1));
    CHECK(p.r2.r2[p.r2.index(3, 0)] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.entropy.values.size() == 11);
    CHECK(p.r2_mean == doctest::Approx(mean_r2(p.r2, cfg.subset)));

    const auto q = run_point(cfg, 1.0);
    CHECK(q.observables.values == p.observables.values);
    CHECK(q.r2.r2 == p.r2.r2);

    SUBCASE("zero field freezes z")
    {
        cfg.record.axis = Axis::z;
        const auto z = run_point(cfg, 0.0);
        for (int k = 0; k < z.observables.n_instances; ++k)
            for (int i = 0; i < 7; ++i)
                for (int m = 0; m < z.observables.n_times(); ++m)
                    CHECK(std::abs(z.observables.at(k, i, m) - z.observables.at(k, i, 0)) <= 1e-10);
    }
}

TEST_CASE("sweeps persist, verify and resume bit-identically")
{
    const fs::path a = scratch("sweep_a");
    const fs::path b = scratch("sweep_b");
    const auto out_a = run_sweep(small_config(a));
    CHECK_FALSE(out_a.partial_failure);
    REQUIRE(out_a.sweep.values.size() == 3);
    REQUIRE(out_a.dip);
    CHECK(verify_manifest(a));
    for (std::size_t j = 0; j < 3; ++j)
        for (auto name : {layout::kObservables, layout::kR2Grid, layout::kHeatmap, layout::kEntropy})
            CHECK(fs::exists(a / layout::point_dir(j) / name));

    // Interrupted after the first point: manifest lists one point and the
    // second point's files are half written.
    run_sweep(small_config(b));
    auto m = RunManifest::parse(io::read_file(b / layout::kManifest));
    m.points.resize(1);
    m.files.clear();
    io::write_atomic(b / layout::kManifest, m.to_json());
    fs::remove(b / layout::kSweepTable);
    io::write_atomic(b / layout::point_dir(1) / layout::kR2Grid, "truncated");
    fs::remove_all(b / layout::point_dir(2));

    RunOptions opt;
    opt.resume = true;
    const auto out_b = run_sweep(small_config(b), opt);
    CHECK(out_b.manifest.points[0].resumed);
    CHECK_FALSE(out_b.manifest.points[1].resumed);
    CHECK(io::read_file(a / layout::kSweepTable) == io::read_file(b / layout::kSweepTable));
    for (std::size_t j = 0; j < 3; ++j)
        for (auto name : {layout::kObservables, layout::kR2Grid, layout::kHeatmap, layout::kEntropy})
            CHECK(io::read_file(a / layout::point_dir(j) / name) == io::read_file(b / layout::point_dir(j) / name));
    CHECK(verify_manifest(b));

    // A changed config fingerprint forces recomputation.
    auto other = small_config(b);
    other.seed = 99;
    const auto out_c = run_sweep(other, opt);
    for (const auto& p : out_c.manifest.points) CHECK_FALSE(p.resumed);

    // Tampering breaks closure.
    io::write_atomic(a / layout::point_dir(0) / layout::kHeatmap, "x");
    CHECK_FALSE(verify_manifest(a));
}

TEST_CASE("export rebuilds tables at a new threshold")
{
    const fs::path dir = scratch("export");
    const auto cfg = small_config(dir);
    const auto run = run_sweep(cfg);
    const auto same = export_run(cfg);
    CHECK(same.sweep.r2_mean == run.sweep.r2_mean);
    const auto loose = export_run(cfg, 0.0);
    const auto strict = export_run(cfg, 1e-2);
    CHECK(fs::exists(dir / "sweep_th0.01.csv"));
    CHECK(fs::exists(dir / layout::point_dir(0) / "heatmap_th0.csv"));
    for (std::size_t j = 0; j < 3; ++j) CHECK(strict.sweep.r2_mean[j] <= loose.sweep.r2_mean[j] + 1e-15);
}

TEST_CASE("single-value and failing sweeps")
{
    auto cfg = small_config(scratch("single"));
    cfg.sweep.values = {1.0};
    const auto one = run_sweep(cfg);
    REQUIRE(one.dip);
    CHECK_FALSE(one.dip->interior);
    CHECK(one.sweep.values.size() == 1);

    auto fail = small_config(scratch("fail"));
    fail.sweep.values = {0.5, 400.0};
    fail.engine.krylov_dim = 10;
    const auto out = run_sweep(fail);
    CHECK(out.partial_failure);
    CHECK(out.sweep.values.size() == 1);
    REQUIRE(out.manifest.points.size() == 2);
    CHECK(out.manifest.points[0].ok);
    CHECK_FALSE(out.manifest.points[1].ok);
    CHECK(out.manifest.points[1].error.find("branch") != std::string::npos);
    CHECK(verify_manifest(fail.output));
}
