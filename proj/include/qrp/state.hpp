#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace qrp {

using cplx = std::complex<double>;

// Normalized pure state of n_sites spins-1/2, 2^n_sites amplitudes.
// Bit i of an amplitude index is site i; 0 = up, 1 = down.
class StateVector {
public:
    static constexpr double kNormTolerance = 1e-10;

    // |index> in the computational basis.
    static StateVector basis(int n_sites, std::size_t index);
    // Takes ownership of `amplitudes` and normalizes them. Throws on a zero
    // vector or a length that is not 2^n_sites.
    static StateVector normalized(int n_sites, std::vector<cplx> amplitudes);
    // Tensor product of single-site states, site 0 first.
    static StateVector product(std::span<const std::array<cplx, 2>> sites);

    int n_sites() const { return n_sites_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }
    double norm() const;

private:
    StateVector(int n_sites, std::vector<cplx> amps) : n_sites_(n_sites), amps_(std::move(amps)) {}

    int n_sites_ = 0;
    std::vector<cplx> amps_;

};

} // namespace qrp
