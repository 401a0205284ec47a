#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrp/model.hpp"
#include "qrp/pauli_operator.hpp"
#include "qrp/state.hpp"

namespace qrp {

struct EngineParams {
    double dt = 0.005;
    int krylov_dim = 20;
    double krylov_tol = 1e-12;
    double t_max = 5.0;
    int max_sites = 22; // 2^22 amplitudes = 64 MiB per state

    // Throws InvalidArgument when a field is out of range for a chain of
    // n_sites spins.
    void validate(int n_sites) const;
    // Number of dt steps in t; throws unless t is a non-negative multiple of dt.
    long steps_for(double t) const;
};

// Lanczos approximation of exp(-i H dt)|v> with the subspace grown one vector
// at a time until the a-posteriori error estimate beta_{m} |[exp(-i T dt)]_{m,0}|
// drops below the tolerance.
class KrylovPropagator {
public:
    KrylovPropagator(const PauliOperator& op, int max_dim, double tol);

    // out = exp(-i H dt) in. Preserves the norm of `in` up to the tolerance;
    // does not renormalize. `out` may alias `in`. Throws EngineError when the
    // estimate is still above tolerance at max_dim.
    void step(std::span<const cplx> in, std::span<cplx> out, double dt);

    int last_dimension() const { return last_dim_; }
    double last_error() const { return last_err_; }

private:
    const PauliOperator& op_;
    int max_dim_;
    double tol_;
    std::vector<std::vector<cplx>> basis_;
    std::vector<cplx> work_;
    int last_dim_ = 0;
    double last_err_ = 0.0;
};

// Fixed-step evolution under a single Hamiltonian, renormalizing after each
// step.
class Propagator {
public:
    Propagator(std::span<const PauliTerm> terms, int n_sites, const EngineParams& params);

    const PauliOperator& hamiltonian() const { return op_; }
    const EngineParams& params() const { return params_; }

    StateVector advance(const StateVector& psi, long n_steps);
    void advance(std::vector<cplx>& amplitudes, long n_steps);

    int max_dimension_used() const { return max_dim_used_; }

private:
    PauliOperator op_;
    EngineParams params_;
    KrylovPropagator krylov_;
    int max_dim_used_ = 0;
};

// H|psi>, unnormalized.
std::vector<cplx> apply_hamiltonian(std::span<const PauliTerm> terms, const StateVector& psi);

double energy(const PauliOperator& op, const StateVector& psi);

// exp(-i H t)|psi> in steps of params.dt.
StateVector evolve(std::span<const PauliTerm> terms, const StateVector& psi,
                   const EngineParams& params, double t);

struct GroundState {
    double energy;
    StateVector psi;
    int restarts; // fresh random starts needed
};

// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
GroundState ground_state(std::span<const PauliTerm> terms, int n_sites, const EngineParams& params,
                         std::uint64_t seed = 1);

} // namespace qrp
