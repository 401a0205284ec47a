#pragma once

#include <span>
#include <string>
#include <vector>

#include "qrp/engine.hpp"
#include "qrp/model.hpp"
#include "qrp/quench.hpp"
#include "qrp/state.hpp"

namespace qrp {

// <O_i(t)>_k for every instance k, site i and recorded time t_m = m dt_record.
struct ObservableGrid {
    int n_instances = 0;
    int n_sites = 0;
    Axis axis = Axis::x;
    std::vector<double> times;
    std::vector<double> values; // row-major [k][i][m]
    std::string meta;

    int n_times() const { return static_cast<int>(times.size()); }
    std::size_t index(int k, int i, int m) const
    {
        return (static_cast<std::size_t>(k) * n_sites + i) * times.size() + m;
    }
    double at(int k, int i, int m) const { return values[index(k, i, m)]; }
    double& at(int k, int i, int m) { return values[index(k, i, m)]; }
};

struct EntropySeries {
    int cut = 0; // sites [0, cut) form the left block
    std::vector<double> times;
    std::vector<double> values; // nats
};

// How record_trajectory propagates the instances.
//  superposition: evolve the two branch states (central spin up / down) once
//    and combine them per instance; every initial state is a linear
//    combination of the two, so this is exact and independent of batch size.
//  per_instance: evolve every instance's initial state separately.
enum class Propagation { superposition, per_instance };

struct RecordSpec {
    Axis axis = Axis::x;
    double dt_record = 0.05;
    double t_max = 5.0;
    Propagation propagation = Propagation::superposition;

    // Throws InvalidArgument unless dt_record is a multiple of engine.dt and
    // t_max a multiple of dt_record.
    void validate(const EngineParams& engine) const;
    int n_times() const;
};

double pauli_expectation(const StateVector& psi, int site, Axis axis);

// S = -sum_j lambda_j^2 ln lambda_j^2 over the Schmidt coefficients of the
// bipartition [0, cut) | [cut, n_sites).
double entanglement_entropy(const StateVector& psi, int cut);

ObservableGrid record_trajectory(std::span<const double> inputs, const ModelSpec& model,
                                 const QuenchConfig& quench, const EngineParams& engine,
                                 const RecordSpec& record);

// Entropy across `cut` along the evolution of a single instance with input s.
EntropySeries record_entropy(double s, int cut, const ModelSpec& model, const QuenchConfig& quench,
                             const EngineParams& engine, const RecordSpec& record);

} // namespace qrp
