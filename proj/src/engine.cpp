#include "qrp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qrp/error.hpp"
#include "qrp/kernels.hpp"
#include "qrp/random.hpp"

namespace qrp {

void EngineParams::validate(int n_sites) const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("engine dt must be positive");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("engine t_max must be positive");
    if (dt > t_max) throw InvalidArgument("engine dt exceeds t_max");
    if (krylov_dim < 2) throw InvalidArgument("krylov_dim must be at least 2");
    if (!(krylov_tol > 0.0)) throw InvalidArgument("krylov_tol must be positive");
    if (n_sites > max_sites)
        throw InvalidArgument("chain of " + std::to_string(n_sites) + " sites exceeds the size cap of " +
                              std::to_string(max_sites));
    if (n_sites < 62 && static_cast<double>(krylov_dim) > std::ldexp(1.0, n_sites))
        throw InvalidArgument("krylov_dim exceeds the Hilbert-space dimension");
}

long EngineParams::steps_for(double t) const
{
    if (!(t >= 0.0)) throw InvalidArgument("evolution time must be non-negative");
    const double q = t / dt;
    const long n = std::lround(q);
    if (std::abs(q - static_cast<double>(n)) > 1e-6)
        throw InvalidArgument("evolution time " + std::to_string(t) + " is not a multiple of dt");
    return n;
}

// ---------------------------------------------------------------------------

KrylovPropagator::KrylovPropagator(const PauliOperator& op, int max_dim, double tol)
    : op_(op), max_dim_(static_cast<int>(std::min<std::size_t>(max_dim, op.dim()))), tol_(tol),
      work_(op.dim())
{
}

void KrylovPropagator::step(std::span<const cplx> in, std::span<cplx> out, double dt)
{
    const double beta0 = std::sqrt(kernels::norm_squared(in));
    if (beta0 == 0.0) {
        std::fill(out.begin(), out.end(), cplx{});
        return;
    }
    if (basis_.empty()) basis_.emplace_back(op_.dim());
    std::copy(in.begin(), in.end(), basis_[0].begin());
    kernels::scale(1.0 / beta0, basis_[0]);

    std::vector<double> alpha, beta;
    Eigen::VectorXcd coeffs;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;

    int m = 0;
    for (int j = 0;; ++j) {
        kernels::apply(op_, basis_[j], work_);
        const double a = kernels::dot(basis_[j], work_).real();
        alpha.push_back(a);
        kernels::axpy(-a, basis_[j], work_);
        if (j > 0) kernels::axpy(-beta[j - 1], basis_[j - 1], work_);
        for (int k = 0; k <= j; ++k)
            kernels::axpy(-kernels::dot(basis_[k], work_), basis_[k], work_);
        const double b = std::sqrt(kernels::norm_squared(work_));

        const int size = j + 1;
        Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(alpha.data(), size);
        Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(beta.data(), size - 1);
        eig.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
        const auto& q = eig.eigenvectors();
        const auto& lam = eig.eigenvalues();
        Eigen::VectorXcd phase(size);
        for (int k = 0; k < size; ++k)
            phase[k] = std::exp(cplx{0.0, -lam[k] * dt}) * q(0, k);
        coeffs = q.cast<cplx>() * phase;

        last_err_ = b * std::abs(coeffs[size - 1]);
        if (last_err_ <= tol_ || b == 0.0) {
            m = size;
            break;
        }
        if (size >= max_dim_)
            throw EngineError("Krylov step did not converge: error estimate " + std::to_string(last_err_) +
                              " above tolerance at dimension " + std::to_string(size));
        beta.push_back(b);
        if (static_cast<int>(basis_.size()) <= size) basis_.emplace_back(op_.dim());
        std::copy(work_.begin(), work_.end(), basis_[size].begin());
        kernels::scale(1.0 / b, basis_[size]);
    }

    last_dim_ = m;
    std::fill(out.begin(), out.end(), cplx{});
    for (int k = 0; k < m; ++k) kernels::axpy(beta0 * coeffs[k], basis_[k], out);
}

// ---------------------------------------------------------------------------

Propagator::Propagator(std::span<const PauliTerm> terms, int n_sites, const EngineParams& params)
    : op_((params.validate(n_sites), terms), n_sites), params_(params),
      krylov_(op_, params.krylov_dim, params.krylov_tol)
{
}

void Propagator::advance(std::vector<cplx>& amplitudes, long n_steps)
{
    for (long s = 0; s < n_steps; ++s) {
        krylov_.step(amplitudes, amplitudes, params_.dt);
        max_dim_used_ = std::max(max_dim_used_, krylov_.last_dimension());
        const double nrm = std::sqrt(kernels::norm_squared(amplitudes));
        kernels::scale(1.0 / nrm, amplitudes);
    }
}

StateVector Propagator::advance(const StateVector& psi, long n_steps)
{
    if (psi.n_sites() != op_.n_sites()) throw InvalidArgument("state and Hamiltonian sizes differ");
    std::vector<cplx> amps(psi.amplitudes().begin(), psi.amplitudes().end());
    advance(amps, n_steps);
    return StateVector::normalized(psi.n_sites(), std::move(amps));
}

std::vector<cplx> apply_hamiltonian(std::span<const PauliTerm> terms, const StateVector& psi)
{
    PauliOperator op(terms, psi.n_sites());
    std::vector<cplx> out(psi.dim());
    kernels::apply(op, psi.amplitudes(), out);
    return out;
}

double energy(const PauliOperator& op, const StateVector& psi)
{
    std::vector<cplx> h(psi.dim());
    kernels::apply(op, psi.amplitudes(), h);
    return kernels::dot(psi.amplitudes(), h).real();
}

StateVector evolve(std::span<const PauliTerm> terms, const StateVector& psi, const EngineParams& params,
                   double t)
{
    const long n_steps = params.steps_for(t);
    Propagator prop(terms, psi.n_sites(), params);
    return prop.advance(psi, n_steps);
}

// ---------------------------------------------------------------------------

namespace {

constexpr int kMaxFreshStarts = 5;
constexpr int kMaxCycles = 500;

std::vector<cplx> random_vector(std::size_t dim, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    std::vector<cplx> v(dim);
    for (auto& x : v) x = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    kernels::scale(1.0 / std::sqrt(kernels::norm_squared(v)), v);
    return v;
}

} // namespace

GroundState ground_state(std::span<const PauliTerm> terms, int n_sites, const EngineParams& params,
                         std::uint64_t seed)
{
    params.validate(n_sites);
    const PauliOperator op(terms, n_sites);
    const std::size_t dim = op.dim();
    const int max_dim = static_cast<int>(std::min<std::size_t>(std::max(params.krylov_dim, 40), dim));
    const double scale = std::max(1.0, op.norm_bound());

    std::vector<std::vector<cplx>> basis(max_dim, std::vector<cplx>(dim));
    std::vector<cplx> w(dim), ritz(dim);

    for (int attempt = 0; attempt <= kMaxFreshStarts; ++attempt) {
        ritz = random_vector(dim, seed + 0x1000u * attempt);
        for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
            basis[0] = ritz;
            std::vector<double> alpha, beta;
            int m = 0;
            bool invariant = false;
            for (int j = 0; j < max_dim; ++j) {
                kernels::apply(op, basis[j], w);
                const double a = kernels::dot(basis[j], w).real();
                alpha.push_back(a);
                for (int pass = 0; pass < 2; ++pass)
                    for (int k = 0; k <= j; ++k) kernels::axpy(-kernels::dot(basis[k], w), basis[k], w);
                const double b = std::sqrt(kernels::norm_squared(w));
                m = j + 1;
                if (b <= 1e-12 * scale) {
                    invariant = true;
                    break;
                }
                if (m == max_dim) break;
                beta.push_back(b);
                basis[m] = w;
                kernels::scale(1.0 / b, basis[m]);
            }

            Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(alpha.data(), m);
            Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(beta.data(), m - 1);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
            eig.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
            const double theta = eig.eigenvalues()[0];
            const Eigen::VectorXd y = eig.eigenvectors().col(0);

            std::fill(ritz.begin(), ritz.end(), cplx{});
            for (int k = 0; k < m; ++k) kernels::axpy(y[k], basis[k], ritz);
            kernels::scale(1.0 / std::sqrt(kernels::norm_squared(ritz)), ritz);

            kernels::apply(op, ritz, w);
            kernels::axpy(-theta, ritz, w);
            const double residual = std::sqrt(kernels::norm_squared(w));
            if (residual <= 1e-9 * std::max(1.0, std::abs(theta))) {
                return {theta, StateVector::normalized(n_sites, std::move(ritz)), attempt};
            }
            // Breakdown without a converged Ritz pair means orthogonality was
            // lost; start over from fresh random amplitudes.
            if (invariant) break;
        }
    }
    throw EngineError("Lanczos ground-state search failed after " + std::to_string(kMaxFreshStarts) +
                      " fresh restarts");
}

} // namespace qrp
