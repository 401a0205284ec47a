#include "qrp/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "qrp/error.hpp"
#include "qrp/grid_io.hpp"

namespace qrp {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in '" + where + "'");
}

template <class T>
void read(const json& obj, const char* key, T& out)
{
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

ModelSpec parse_model(const json& m)
{
    reject_unknown(m, "model", {"variant", "n_sites", "couplings"});
    if (!m.contains("variant")) throw ConfigError("model.variant is required");
    ModelSpec spec;
    switch (parse_variant(m.at("variant").get<std::string>())) {
    case Variant::tfim: spec.couplings = TfimCouplings{}; break;
    case Variant::annni: spec.couplings = AnnniCouplings{}; break;
    case Variant::cluster: spec.couplings = ClusterCouplings{}; break;
    case Variant::cluster_field: spec.couplings = ClusterFieldCouplings{}; break;
    }
    read(m, "n_sites", spec.n_sites);
    if (m.contains("couplings")) {
        const auto& c = m.at("couplings");
        if (!c.is_object()) throw ConfigError("model.couplings must be an object");
        // alpha is applied last so explicit J_zz is honored.
        for (const auto& [key, value] : c.items())
            if (key != "alpha") spec = with_parameter(spec, key, value.get<double>());
        if (c.contains("alpha")) spec = with_parameter(spec, "alpha", c.at("alpha").get<double>());
    }
    return spec;
}

json model_json(const ModelSpec& spec)
{
    json c = json::object();
    for (const auto& name : parameter_names(spec.variant()))
        if (name != "alpha") c[name] = get_parameter(spec, name);
    return {{"variant", std::string(variant_name(spec.variant()))}, {"n_sites", spec.n_sites}, {"couplings", c}};
}

} // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& json_text)
{
    ExperimentConfig cfg;
    try {
        const json root = json::parse(json_text);
        reject_unknown(root, "config",
                       {"model", "sweep", "quench", "engine", "batch", "observable", "analysis", "entropy", "output"});
        if (!root.contains("model")) throw ConfigError("'model' section is required");
        if (!root.contains("sweep")) throw ConfigError("'sweep' section is required");
        cfg.model = parse_model(root.at("model"));

        const auto& sw = root.at("sweep");
        reject_unknown(sw, "sweep", {"parameter", "values"});
        cfg.sweep.parameter = sw.at("parameter").get<std::string>();
        cfg.sweep.values = sw.at("values").get<std::vector<double>>();

        if (root.contains("quench")) {
            const auto& q = root.at("quench");
            reject_unknown(q, "quench", {"background", "encoding"});
            if (q.contains("background")) cfg.quench.background = parse_background(q.at("background").get<std::string>());
            if (q.contains("encoding")) cfg.quench.encoding = parse_encoding(q.at("encoding").get<std::string>());
        }
        if (root.contains("engine")) {
            const auto& e = root.at("engine");
            reject_unknown(e, "engine", {"dt", "krylov_dim", "krylov_tol", "max_sites"});
            read(e, "dt", cfg.engine.dt);
            read(e, "krylov_dim", cfg.engine.krylov_dim);
            read(e, "krylov_tol", cfg.engine.krylov_tol);
            read(e, "max_sites", cfg.engine.max_sites);
        }
        if (root.contains("batch")) {
            const auto& b = root.at("batch");
            reject_unknown(b, "batch", {"seed", "n_train", "n_test"});
            read(b, "seed", cfg.seed);
            read(b, "n_train", cfg.n_train);
            read(b, "n_test", cfg.n_test);
        }
        if (root.contains("observable")) {
            const auto& o = root.at("observable");
            reject_unknown(o, "observable", {"axis", "dt_record", "t_max", "propagation"});
            if (o.contains("axis")) cfg.record.axis = parse_axis(o.at("axis").get<std::string>());
            read(o, "dt_record", cfg.record.dt_record);
            read(o, "t_max", cfg.record.t_max);
            if (o.contains("propagation")) {
                const auto p = o.at("propagation").get<std::string>();
                if (p == "superposition") cfg.record.propagation = Propagation::superposition;
                else if (p == "per_instance") cfg.record.propagation = Propagation::per_instance;
                else throw ConfigError("unknown propagation '" + p + "'");
            }
        }
        cfg.subset.t_hi = cfg.record.t_max;
        if (root.contains("analysis")) {
            const auto& a = root.at("analysis");
            reject_unknown(a, "analysis", {"threshold", "window_sites", "t_lo", "t_hi", "include_t_lo"});
            read(a, "threshold", cfg.threshold);
            read(a, "window_sites", cfg.subset.n_sites);
            read(a, "t_lo", cfg.subset.t_lo);
            read(a, "t_hi", cfg.subset.t_hi);
            read(a, "include_t_lo", cfg.subset.include_lo);
        }
        if (root.contains("entropy")) {
            const auto& e = root.at("entropy");
            reject_unknown(e, "entropy", {"cut", "input"});
            read(e, "cut", cfg.entropy_cut);
            read(e, "input", cfg.entropy_input);
        }
        read(root, "output", cfg.output);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    cfg.engine.t_max = cfg.record.t_max;
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path)
{
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse(text);
}

void ExperimentConfig::validate() const
{
    try {
        model.validate();
        quench.validate();
        engine.validate(model.n_sites);
        record.validate(engine);
        if (sweep.values.empty()) throw ConfigError("sweep.values must not be empty");
        for (double v : sweep.values) {
            if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
            with_parameter(model, sweep.parameter, v).validate();
        }
        if (n_train < 2 || n_test < 2) throw ConfigError("batch needs at least two training and two test instances");
        if (record.t_max > engine.t_max + 1e-12) throw ConfigError("observable.t_max exceeds engine.t_max");
        if (subset.t_hi > record.t_max + 1e-9)
            throw ConfigError("analysis.t_hi exceeds the recorded range (observable.t_max)");
        if (subset.t_lo < 0.0 || subset.t_lo >= subset.t_hi) throw ConfigError("analysis time window is empty");
        if (subset.n_sites < 1 || subset.n_sites % 2 == 0 || subset.n_sites > model.n_sites)
            throw ConfigError("analysis.window_sites must be odd and fit the chain");
        if (!(threshold >= 0.0)) throw ConfigError("analysis.threshold must be non-negative");
        const int cut = resolved_entropy_cut();
        if (cut < 1 || cut > model.n_sites - 1) throw ConfigError("entropy.cut must lie in [1, n_sites - 1]");
        if (!(entropy_input >= 0.0 && entropy_input <= 1.0)) throw ConfigError("entropy.input must lie in [0, 1]");
        if (output.empty()) throw ConfigError("output directory must be set");
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

namespace {

json canonical(const ExperimentConfig& c)
{
    return {
        {"model", model_json(c.model)},
        {"sweep", {{"parameter", c.sweep.parameter}, {"values", c.sweep.values}}},
        {"quench",
         {{"background", std::string(background_name(c.quench.background))},
          {"encoding", std::string(encoding_name(c.quench.encoding))}}},
        {"engine",
         {{"dt", c.engine.dt},
          {"krylov_dim", c.engine.krylov_dim},
          {"krylov_tol", c.engine.krylov_tol},
          {"max_sites", c.engine.max_sites}}},
        {"batch", {{"seed", c.seed}, {"n_train", c.n_train}, {"n_test", c.n_test}}},
        {"observable",
         {{"axis", std::string(1, axis_name(c.record.axis))},
          {"dt_record", c.record.dt_record},
          {"t_max", c.record.t_max},
          {"propagation", c.record.propagation == Propagation::superposition ? "superposition" : "per_instance"}}},
        {"analysis",
         {{"threshold", c.threshold},
          {"window_sites", c.subset.n_sites},
          {"t_lo", c.subset.t_lo},
          {"t_hi", c.subset.t_hi},
          {"include_t_lo", c.subset.include_lo}}},
        {"entropy", {{"cut", c.resolved_entropy_cut()}, {"input", c.entropy_input}}},
    };
}

} // namespace

std::string ExperimentConfig::to_json() const
{
    json j = canonical(*this);
    j["output"] = output;
    return j.dump(2);
}

std::string ExperimentConfig::fingerprint() const { return io::sha256_hex(canonical(*this).dump()); }

} // namespace qrp
