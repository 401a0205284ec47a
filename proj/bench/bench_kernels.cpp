// Serial reference vs OpenMP kernels on the Hamiltonians used in sweeps.
//
//   ./bench_kernels --benchmark_filter=Apply

#include <benchmark/benchmark.h>

#include <vector>

#include "qrp/engine.hpp"
#include "qrp/kernels.hpp"
#include "qrp/model.hpp"
#include "qrp/quench.hpp"
#include "qrp/random.hpp"

namespace {

qrp::ModelSpec cluster_field(int n)
{
    return {n, qrp::ClusterFieldCouplings{0.1, 0.45, 0.45}};
}

std::vector<qrp::cplx> random_state(int n)
{
    qrp::SplitMix64 rng(42);
    std::vector<qrp::cplx> v(std::size_t{1} << n);
    for (auto& x : v) x = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    return v;
}

void BM_ApplySerial(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto terms = qrp::expand_terms(cluster_field(n));
    const auto in = random_state(n);
    std::vector<qrp::cplx> out(in.size());
    for (auto _ : state) {
        qrp::kernels::serial::apply_terms(terms, n, in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(in.size()));
}

void BM_ApplyParallel(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto terms = qrp::expand_terms(cluster_field(n));
    const qrp::PauliOperator op(terms, n);
    const auto in = random_state(n);
    std::vector<qrp::cplx> out(in.size());
    for (auto _ : state) {
        qrp::kernels::apply(op, in, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(in.size()));
    state.counters["threads"] = qrp::kernels::threads();
}

void BM_DotSerial(benchmark::State& state)
{
    const auto a = random_state(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(qrp::kernels::serial::dot(a, a));
}

void BM_DotParallel(benchmark::State& state)
{
    const auto a = random_state(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(qrp::kernels::dot(a, a));
}

void BM_KrylovStep(benchmark::State& state)
{
    const int n = static_cast<int>(state.range(0));
    const auto terms = qrp::expand_terms(cluster_field(n));
    const qrp::PauliOperator op(terms, n);
    qrp::KrylovPropagator krylov(op, 20, 1e-12);
    auto psi = qrp::build_initial_state(0.3, n, {});
    std::vector<qrp::cplx> v(psi.amplitudes().begin(), psi.amplitudes().end());
    for (auto _ : state) krylov.step(v, v, 0.005);
    state.counters["krylov_dim"] = krylov.last_dimension();
}

} // namespace

BENCHMARK(BM_ApplySerial)->DenseRange(9, 17, 4);
BENCHMARK(BM_ApplyParallel)->DenseRange(9, 17, 4);
BENCHMARK(BM_DotSerial)->DenseRange(9, 17, 4);
BENCHMARK(BM_DotParallel)->DenseRange(9, 17, 4);
BENCHMARK(BM_KrylovStep)->DenseRange(9, 17, 4);

BENCHMARK_MAIN();
