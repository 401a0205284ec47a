#include "qrp/state.hpp"

#include <cmath>

#include "qrp/error.hpp"
#include "qrp/kernels.hpp"

namespace qrp {

namespace {

void check_length(int n_sites, std::size_t len)
{
    if (n_sites < 1 || n_sites > 40) throw InvalidArgument("unsupported chain length");
    if (len != (std::size_t{1} << n_sites))
        throw InvalidArgument("amplitude count must be 2^n_sites");
}

} // namespace

StateVector StateVector::basis(int n_sites, std::size_t index)
{
    check_length(n_sites, std::size_t{1} << n_sites);
    std::vector<cplx> amps(std::size_t{1} << n_sites);
    if (index >= amps.size()) throw InvalidArgument("basis index out of range");
    amps[index] = 1.0;
    return {n_sites, std::move(amps)};
}

StateVector StateVector::normalized(int n_sites, std::vector<cplx> amplitudes)
{
    check_length(n_sites, amplitudes.size());
    const double nrm = std::sqrt(kernels::norm_squared(amplitudes));
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw InvalidArgument("cannot normalize a zero or non-finite vector");
    kernels::scale(1.0 / nrm, amplitudes);
    return {n_sites, std::move(amplitudes)};
}

StateVector StateVector::product(std::span<const std::array<cplx, 2>> sites)
{
    const int n = static_cast<int>(sites.size());
    check_length(n, std::size_t{1} << n);
    std::vector<cplx> amps(std::size_t{1} << n);
    amps[0] = 1.0;
    // Site i multiplies in at bit i; after step i the first 2^(i+1) entries hold
    // the product over sites 0..i.
    for (int i = 0; i < n; ++i) {
        const std::size_t half = std::size_t{1} << i;
        for (std::size_t x = 0; x < half; ++x) {
            amps[x + half] = amps[x] * sites[i][1];
            amps[x] *= sites[i][0];
        }
    }
    return normalized(n, std::move(amps));
}

double StateVector::norm() const { return std::sqrt(kernels::norm_squared(amps_)); }

} // namespace qrp
