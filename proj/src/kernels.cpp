#include "qrp/kernels.hpp"

#include <bit>
#include <cstdint>
#include <vector>

#include <omp.h>

#include "qrp/error.hpp"

namespace qrp::kernels {

namespace {

// Block length for deterministic reductions and the size below which
// parallel regions are not worth their fork/join cost.
constexpr std::size_t kBlock = std::size_t{1} << 12;
constexpr std::int64_t kParallelMin = std::int64_t{1} << 12;

inline bool odd_parity(std::uint64_t x) { return std::popcount(x) & 1; }

void check_same(std::size_t a, std::size_t b)
{
    if (a != b) throw InvalidArgument("state dimension mismatch");
}

template <class BlockFn>
auto blocked_sum(std::size_t n, BlockFn&& fn)
{
    using T = decltype(fn(std::size_t{0}, std::size_t{0}));
    const auto n_blocks = static_cast<std::int64_t>((n + kBlock - 1) / kBlock);
    std::vector<T> partial(static_cast<std::size_t>(n_blocks));
#pragma omp parallel for schedule(static) if (n_blocks > 1)
    for (std::int64_t b = 0; b < n_blocks; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(n, lo + kBlock);
        partial[static_cast<std::size_t>(b)] = fn(lo, hi);
    }
    T total{};
    for (const T& p : partial) total += p;
    return total;
}

// (sigma^axis b)[y] for the single bit `bit`.
inline cplx pauli_column(std::span<const cplx> b, std::uint64_t y, std::uint64_t bit, Axis axis)
{
    switch (axis) {
    case Axis::z: return (y & bit) ? -b[y] : b[y];
    case Axis::x: return b[y ^ bit];
    case Axis::y: {
        const cplx v = b[y ^ bit];
        return (y & bit) ? cplx{-v.imag(), v.real()} : cplx{v.imag(), -v.real()};
    }
    }
    return {};
}

} // namespace

void apply(const PauliOperator& op, std::span<const cplx> in, std::span<cplx> out)
{
    check_same(in.size(), op.dim());
    check_same(out.size(), op.dim());
    const auto diag = op.diagonal();
    const auto groups = op.groups();
    const auto n = static_cast<std::int64_t>(op.dim());

#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (std::int64_t yi = 0; yi < n; ++yi) {
        const auto y = static_cast<std::uint64_t>(yi);
        cplx acc = diag[y] * in[y];
        for (const auto& g : groups) {
            const std::uint64_t x = y ^ g.flip;
            cplx c{};
            for (const auto& e : g.entries)
                c += odd_parity(x & e.sign_mask) ? -e.coefficient : e.coefficient;
            acc += c * in[x];
        }
        out[y] = acc;
    }
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b)
{
    check_same(a.size(), b.size());
    return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        cplx s{};
        for (std::size_t i = lo; i < hi; ++i) s += std::conj(a[i]) * b[i];
        return s;
    });
}

double norm_squared(std::span<const cplx> a)
{
    return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += std::norm(a[i]);
        return s;
    });
}

void axpy(cplx alpha, std::span<const cplx> x, std::span<cplx> y)
{
    check_same(x.size(), y.size());
    const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(cplx alpha, std::span<cplx> x)
{
    const auto n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (n >= kParallelMin)
    for (std::int64_t i = 0; i < n; ++i) x[i] *= alpha;
}

cplx pauli_element(std::span<const cplx> a, std::span<const cplx> b, int site, Axis axis)
{
    check_same(a.size(), b.size());
    const std::uint64_t bit = std::uint64_t{1} << site;
    if (bit >= a.size()) throw InvalidArgument("site out of range");
    return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        cplx s{};
        for (std::size_t y = lo; y < hi; ++y) s += std::conj(a[y]) * pauli_column(b, y, bit, axis);
        return s;
    });
}

int threads() { return omp_get_max_threads(); }

void set_threads(int n)
{
    if (n < 1) throw InvalidArgument("thread count must be positive");
    omp_set_num_threads(n);
}

namespace serial {

void apply_terms(std::span<const PauliTerm> terms, int n_sites, std::span<const cplx> in,
                 std::span<cplx> out)
{
    check_terms(terms, n_sites);
    const std::size_t dim = std::size_t{1} << n_sites;
    check_same(in.size(), dim);
    check_same(out.size(), dim);
    std::fill(out.begin(), out.end(), cplx{});
    for (const auto& t : terms) {
        for (std::size_t x = 0; x < dim; ++x) {
            std::size_t target = x;
            cplx amp = t.coefficient * in[x];
            for (const auto& f : t.factors) {
                const std::size_t bit = std::size_t{1} << f.site;
                const bool down = x & bit;
                switch (f.axis) {
                case Axis::x: target ^= bit; break;
                case Axis::z:
                    if (down) amp = -amp;
                    break;
                case Axis::y:
                    // Y|up> = i|down>, Y|down> = -i|up>
                    target ^= bit;
                    amp *= down ? cplx{0, -1} : cplx{0, 1};
                    break;
                }
            }
            out[target] += amp;
        }
    }
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b)
{
    check_same(a.size(), b.size());
    cplx s{};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm_squared(std::span<const cplx> a)
{
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return s;
}

cplx pauli_element(std::span<const cplx> a, std::span<const cplx> b, int site, Axis axis)
{
    check_same(a.size(), b.size());
    const std::size_t bit = std::size_t{1} << site;
    if (bit >= a.size()) throw InvalidArgument("site out of range");
    cplx s{};
    for (std::size_t x = 0; x < b.size(); ++x) {
        // sigma|x> = phase |x ^ flip>
        const bool down = x & bit;
        switch (axis) {
        case Axis::z: s += std::conj(a[x]) * (down ? -b[x] : b[x]); break;
        case Axis::x: s += std::conj(a[x ^ bit]) * b[x]; break;
        case Axis::y: s += std::conj(a[x ^ bit]) * (down ? cplx{0, -1} : cplx{0, 1}) * b[x]; break;
        }
    }
    return s;
}

} // namespace serial

} // namespace qrp::kernels
