#include "qrp/observables.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include <Eigen/SVD>

#include "qrp/error.hpp"
#include "qrp/kernels.hpp"

namespace qrp {

namespace {

constexpr double kImagResidual = 1e-10;

long ratio_as_integer(double num, double den, const char* what)
{
    const double q = num / den;
    const long n = std::lround(q);
    if (n < 1 || std::abs(q - static_cast<double>(n)) > 1e-6) throw InvalidArgument(what);
    return n;
}

std::string describe(const ModelSpec& model, const QuenchConfig& quench, const EngineParams& engine,
                     const RecordSpec& record)
{
    std::string out(variant_name(model.variant()));
    out += " n_sites=" + std::to_string(model.n_sites);
    char buf[64];
    for (const auto& name : parameter_names(model.variant())) {
        if (name == "alpha") continue;
        std::snprintf(buf, sizeof buf, " %s=%.17g", name.c_str(), get_parameter(model, name));
        out += buf;
    }
    out += "; quench=";
    out += background_name(quench.background);
    out += "/";
    out += encoding_name(quench.encoding);
    std::snprintf(buf, sizeof buf, "; dt=%.17g krylov_dim=%d krylov_tol=%.3g", engine.dt, engine.krylov_dim,
                  engine.krylov_tol);
    out += buf;
    out += "; axis=";
    out += axis_name(record.axis);
    out += record.propagation == Propagation::superposition ? "; propagation=superposition"
                                                            : "; propagation=per_instance";
    return out;
}

ObservableGrid empty_grid(std::span<const double> inputs, const ModelSpec& model, const QuenchConfig& quench,
                          const EngineParams& engine, const RecordSpec& record)
{
    ObservableGrid grid;
    grid.n_instances = static_cast<int>(inputs.size());
    grid.n_sites = model.n_sites;
    grid.axis = record.axis;
    grid.times.resize(record.n_times());
    for (int m = 0; m < record.n_times(); ++m) grid.times[m] = m * record.dt_record;
    grid.values.assign(static_cast<std::size_t>(grid.n_instances) * grid.n_sites * grid.times.size(), 0.0);
    grid.meta = describe(model, quench, engine, record);
    return grid;
}

void record_superposition(ObservableGrid& grid, std::span<const double> inputs, const ModelSpec& model,
                          const QuenchConfig& quench, const EngineParams& engine, const RecordSpec& record)
{
    const auto terms = expand_terms(model);
    Propagator prop(terms, model.n_sites, engine);
    auto branches = branch_states(model.n_sites, quench);
    std::vector<cplx> up(branches[0].amplitudes().begin(), branches[0].amplitudes().end());
    std::vector<cplx> down(branches[1].amplitudes().begin(), branches[1].amplitudes().end());

    std::vector<std::array<cplx, 2>> coeff;
    coeff.reserve(inputs.size());
    for (double s : inputs) coeff.push_back(local_state(s, quench.encoding));

    const long steps = ratio_as_integer(record.dt_record, engine.dt, "dt_record must be a multiple of dt");
    for (int m = 0; m < grid.n_times(); ++m) {
        if (m > 0) {
            for (auto* branch : {&up, &down}) {
                try {
                    prop.advance(*branch, steps);
                } catch (const EngineError& e) {
                    throw EngineError(std::string(e.what()) + " (branch with central spin " +
                                      (branch == &up ? "up" : "down") + ", shared by all " +
                                      std::to_string(inputs.size()) + " instances)");
                }
            }
        }
        for (int i = 0; i < grid.n_sites; ++i) {
            const double o_uu = kernels::pauli_element(up, up, i, record.axis).real();
            const double o_dd = kernels::pauli_element(down, down, i, record.axis).real();
            const cplx o_ud = kernels::pauli_element(up, down, i, record.axis);
            for (int k = 0; k < grid.n_instances; ++k) {
                const auto& [a, b] = coeff[k];
                grid.at(k, i, m) = std::norm(a) * o_uu + std::norm(b) * o_dd +
                                   2.0 * (std::conj(a) * b * o_ud).real();
            }
        }
    }
}

void record_per_instance(ObservableGrid& grid, std::span<const double> inputs, const ModelSpec& model,
                         const QuenchConfig& quench, const EngineParams& engine, const RecordSpec& record)
{
    const auto terms = expand_terms(model);
    const long steps = ratio_as_integer(record.dt_record, engine.dt, "dt_record must be a multiple of dt");
    const auto n = static_cast<long>(inputs.size());
    std::optional<std::string> failure;

#pragma omp parallel
    {
        std::optional<Propagator> prop;
#pragma omp for schedule(dynamic)
        for (long k = 0; k < n; ++k) {
            try {
                if (!prop) prop.emplace(terms, model.n_sites, engine);
                StateVector init = build_initial_state(inputs[k], model.n_sites, quench);
                std::vector<cplx> amps(init.amplitudes().begin(), init.amplitudes().end());
                for (int m = 0; m < grid.n_times(); ++m) {
                    if (m > 0) prop->advance(amps, steps);
                    for (int i = 0; i < grid.n_sites; ++i)
                        grid.at(static_cast<int>(k), i, m) =
                            kernels::pauli_element(amps, amps, i, record.axis).real();
                }
            } catch (const std::exception& e) {
#pragma omp critical(qrp_record_failure)
                if (!failure) failure = std::string(e.what()) + " (instance " + std::to_string(k) + ")";
            }
        }
    }
    if (failure) throw EngineError(*failure);
}

} // namespace

void RecordSpec::validate(const EngineParams& engine) const
{
    if (!(dt_record > 0.0)) throw InvalidArgument("dt_record must be positive");
    if (!(t_max > 0.0)) throw InvalidArgument("t_max must be positive");
    ratio_as_integer(dt_record, engine.dt, "dt_record must be a multiple of the engine dt");
    ratio_as_integer(t_max, dt_record, "t_max must be a multiple of dt_record");
}

int RecordSpec::n_times() const { return static_cast<int>(std::lround(t_max / dt_record)) + 1; }

double pauli_expectation(const StateVector& psi, int site, Axis axis)
{
    if (site < 0 || site >= psi.n_sites()) throw InvalidArgument("site out of range");
    const cplx v = kernels::pauli_element(psi.amplitudes(), psi.amplitudes(), site, axis);
    if (std::abs(v.imag()) > kImagResidual)
        throw EngineError("Pauli expectation has imaginary residual " + std::to_string(v.imag()));
    return v.real();
}

double entanglement_entropy(const StateVector& psi, int cut)
{
    const int n = psi.n_sites();
    if (cut < 1 || cut > n - 1) throw InvalidArgument("cut must lie in [1, n_sites - 1]");
    const Eigen::Index rows = Eigen::Index{1} << cut;
    const Eigen::Index cols = Eigen::Index{1} << (n - cut);
    // Column-major: entry (left, right) sits at left + right * 2^cut.
    Eigen::Map<const Eigen::MatrixXcd> m(psi.amplitudes().data(), rows, cols);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    double s = 0.0;
    for (Eigen::Index j = 0; j < svd.singularValues().size(); ++j) {
        const double p = svd.singularValues()[j] * svd.singularValues()[j];
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

ObservableGrid record_trajectory(std::span<const double> inputs, const ModelSpec& model,
                                 const QuenchConfig& quench, const EngineParams& engine,
                                 const RecordSpec& record)
{
    model.validate();
    quench.validate();
    engine.validate(model.n_sites);
    record.validate(engine);
    ObservableGrid grid = empty_grid(inputs, model, quench, engine, record);
    if (record.propagation == Propagation::superposition)
        record_superposition(grid, inputs, model, quench, engine, record);
    else
        record_per_instance(grid, inputs, model, quench, engine, record);
    return grid;
}

EntropySeries record_entropy(double s, int cut, const ModelSpec& model, const QuenchConfig& quench,
                             const EngineParams& engine, const RecordSpec& record)
{
    model.validate();
    engine.validate(model.n_sites);
    record.validate(engine);
    const auto terms = expand_terms(model);
    Propagator prop(terms, model.n_sites, engine);
    const long steps = ratio_as_integer(record.dt_record, engine.dt, "dt_record must be a multiple of dt");

    EntropySeries series;
    series.cut = cut;
    StateVector psi = build_initial_state(s, model.n_sites, quench);
    for (int m = 0; m < record.n_times(); ++m) {
        if (m > 0) psi = prop.advance(psi, steps);
        series.times.push_back(m * record.dt_record);
        series.values.push_back(entanglement_entropy(psi, cut));
    }
    return series;
}

} // namespace qrp
