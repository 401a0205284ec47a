#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qrp/model.hpp"

namespace qrp {

using cplx = std::complex<double>;

// A sum of Pauli strings compiled for matrix-free application.
//
// Site i is bit i of a basis index; bit value 0 is |up>, 1 is |down>.
// A string P acts as P|x> = phase(x) |x ^ flip>, where flip collects the X/Y
// bits and phase(x) = i^{#Y} * (-1)^{popcount(x & (Z|Y bits))}. Strings with
// no X/Y factor are folded into a precomputed diagonal; the rest are grouped
// by flip mask.
class PauliOperator {
public:
    struct Entry {
        cplx coefficient;        // term coefficient times i^{#Y}
        std::uint64_t sign_mask; // Z and Y bits
    };
    struct FlipGroup {
        std::uint64_t flip;
        std::vector<Entry> entries;
    };

    PauliOperator(std::span<const PauliTerm> terms, int n_sites);

    int n_sites() const { return n_sites_; }
    std::size_t dim() const { return std::size_t{1} << n_sites_; }
    std::span<const double> diagonal() const { return diagonal_; }
    std::span<const FlipGroup> groups() const { return groups_; }
    // Upper bound on the spectral norm: sum of |coefficients|.
    double norm_bound() const { return norm_bound_; }

private:
    int n_sites_;
    std::vector<double> diagonal_;
    std::vector<FlipGroup> groups_;
    double norm_bound_ = 0.0;
};

// Throws InvalidArgument when a factor addresses a site outside [0, n_sites)
// or sites are not strictly increasing.
void check_terms(std::span<const PauliTerm> terms, int n_sites);

} // namespace qrp
