#pragma once

#include <complex>
#include <span>

#include "qrp/pauli_operator.hpp"

// Data-parallel state-vector kernels. The default entry points use OpenMP;
// reductions accumulate fixed-size blocks and combine the partial sums in
// block order, so results are bit-identical for any thread count.
//
// kernels::serial holds a straightforward single-threaded reference written
// directly against the term list; tests and the benchmark compare the two.
namespace qrp::kernels {

// out = H in. `out` must not alias `in`.
void apply(const PauliOperator& op, std::span<const cplx> in, std::span<cplx> out);

cplx dot(std::span<const cplx> a, std::span<const cplx> b); // <a|b>
double norm_squared(std::span<const cplx> a);
void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y); // y += alpha x
void scale(cplx alpha, std::span<cplx> x);

// <a| sigma^axis_site |b>
cplx pauli_element(std::span<const cplx> a, std::span<const cplx> b, int site, Axis axis);

// Number of OpenMP threads used by the parallel kernels.
int threads();
void set_threads(int n);

namespace serial {

// Scatter form, one term at a time: out[x ^ flip] += c * phase(x) * in[x].
void apply_terms(std::span<const PauliTerm> terms, int n_sites, std::span<const cplx> in,
                 std::span<cplx> out);

cplx dot(std::span<const cplx> a, std::span<const cplx> b);
double norm_squared(std::span<const cplx> a);
cplx pauli_element(std::span<const cplx> a, std::span<const cplx> b, int site, Axis axis);

} // namespace serial

} // namespace qrp::kernels
