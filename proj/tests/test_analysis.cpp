#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrp/analysis.hpp"
#include "qrp/error.hpp"
#include "qrp/random.hpp"

using namespace qrp;

namespace {

// Direct 2x2 normal-equations solve.
std::pair<double, double> normal_equations(std::span<const double> x, std::span<const double> y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double det = n * sxx - sx * sx;
    return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

// Squared Pearson correlation, two-pass.
double pearson2(std::span<const double> a, std::span<const double> b)
{
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double c = 0, va = 0, vb = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        c += (a[k] - ma) * (b[k] - mb);
        va += (a[k] - ma) * (a[k] - ma);
        vb += (b[k] - mb) * (b[k] - mb);
    }
    return c * c / (va * vb);
}

ObservableGrid synthetic_grid(const InputBatch& batch, int n_sites, int n_times,
                              const std::function<double(double, int, int)>& f)
{
    ObservableGrid g;
    g.n_instances = static_cast<int>(batch.size());
    g.n_sites = n_sites;
    for (int m = 0; m < n_times; ++m) g.times.push_back(0.5 * m);
    g.values.resize(static_cast<std::size_t>(g.n_instances) * n_sites * n_times);
    for (int k = 0; k < g.n_instances; ++k)
        for (int i = 0; i < n_sites; ++i)
            for (int m = 0; m < n_times; ++m) g.at(k, i, m) = f(batch.values[k], i, m);
    return g;
}

R2Grid filled_grid(int n_sites, int n_times, double value)
{
    R2Grid g;
    g.n_sites = n_sites;
    for (int m = 0; m < n_times; ++m) g.times.push_back(0.5 * m);
    g.r2.assign(static_cast<std::size_t>(n_sites) * n_times, value);
    g.delta.assign(g.r2.size(), 1.0);
    g.zeroed.assign(g.r2.size(), 0);
    return g;
}

} // namespace

TEST_CASE("readout training examples")
{
    std::vector<double> s, obs;
    for (int j = 1; j <= 9; ++j) {
        s.push_back(j / 10.0);
        obs.push_back(2 * s.back() + 3);
    }
    const auto w = train_readout(obs, s);
    CHECK(w.w_obs == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.w_const == doctest::Approx(-1.5).epsilon(1e-12));
    for (std::size_t k = 0; k < s.size(); ++k) CHECK(std::abs(w(obs[k]) - s[k]) <= 1e-12);

    const std::vector<double> flat(9, 0.7);
    const auto wc = train_readout(flat, s);
    CHECK(wc.w_obs == 0.0);
    CHECK(wc.w_const == doctest::Approx(0.5).epsilon(1e-14));

    SplitMix64 rng(42);
    std::vector<double> noisy;
    for (double v : s) noisy.push_back(v + 0.01 * (rng.uniform() - 0.5));
    const auto wn = train_readout(noisy, s);
    const auto [a, b] = normal_equations(noisy, s);
    CHECK(std::abs(wn.w_obs - a) <= 1e-10);
    CHECK(std::abs(wn.w_const - b) <= 1e-10);

    CHECK_THROWS_AS(train_readout(std::vector<double>{1.0}, std::vector<double>{1.0}), InvalidArgument);
    CHECK_THROWS_AS(train_readout(obs, std::vector<double>{1.0, 2.0}), InvalidArgument);
}

TEST_CASE("squared correlation examples")
{
    const std::vector<double> s{0.1, 0.4, 0.2, 0.9, 0.5};
    std::vector<double> neg;
    for (double v : s) neg.push_back(-v);
    CHECK(r_squared(s, s) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r_squared(neg, s) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r_squared(std::vector<double>(5, 0.3), s) == 0.0);
    CHECK_THROWS_AS(r_squared(s, std::vector<double>(5, 0.2)), InvalidArgument);
}

TEST_CASE("squared correlation is affine invariant and matches Pearson")
{
    SplitMix64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> y(40), s(40);
        for (int k = 0; k < 40; ++k) {
            s[k] = rng.uniform();
            y[k] = s[k] + 0.5 * (rng.uniform() - 0.5);
        }
        const double a = (rng.uniform() - 0.5) * 20 + (rng.uniform() < 0.5 ? 0.1 : -0.1);
        const double b = (rng.uniform() - 0.5) * 100;
        std::vector<double> z(40);
        for (int k = 0; k < 40; ++k) z[k] = a * y[k] + b;
        const double r = r_squared(y, s);
        CHECK(std::abs(r_squared(z, s) - r) <= 1e-10);
        CHECK(std::abs(r - pearson2(y, s)) <= 1e-12);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
    }
}

TEST_CASE("average absolute deviation examples")
{
    CHECK(average_abs_deviation(std::vector<double>{0.5, 0.5, 0.5, 0.5}) == 0.0);
    CHECK(average_abs_deviation(std::vector<double>{0.0, 1.0}) == 0.5);
    const std::vector<double> x{0.1, 0.2, 0.4};
    double brute = 0;
    const double mean = (0.1 + 0.2 + 0.4) / 3;
    for (double v : x) brute += std::abs(v - mean);
    CHECK(average_abs_deviation(x) == doctest::Approx(brute / 3).epsilon(1e-15));
    CHECK(average_abs_deviation(x) == doctest::Approx(1.0 / 9).epsilon(1e-14));
}

TEST_CASE("R2 grids from synthetic observables")
{
    const auto batch = sample_inputs(11, 16, 16);
    SUBCASE("observable equal to the input")
    {
        const auto g = build_r2_grid(synthetic_grid(batch, 3, 4, [](double s, int, int) { return s; }), batch);
        for (double r : g.r2) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
        for (auto z : g.zeroed) CHECK(z == 0);
    }
    SUBCASE("affine monotone observables")
    {
        const auto g = build_r2_grid(
            synthetic_grid(batch, 3, 4, [](double s, int i, int m) { return (m + 1) * (i - 1.5) * s + 0.3 * m; }),
            batch);
        for (double r : g.r2) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("constant observables are fully masked")
    {
        const auto g = build_r2_grid(synthetic_grid(batch, 3, 4, [](double, int, int) { return 0.25; }), batch);
        for (std::size_t j = 0; j < g.r2.size(); ++j) {
            CHECK(g.r2[j] == 0.0);
            CHECK(g.zeroed[j] == 1);
            CHECK(g.delta[j] == 0.0);
        }
    }
    SUBCASE("mismatched batch")
    {
        const auto other = sample_inputs(11, 8, 8);
        CHECK_THROWS_AS(build_r2_grid(synthetic_grid(batch, 3, 4, [](double s, int, int) { return s; }), other),
                        InvalidArgument);
    }
}

TEST_CASE("raising the threshold only grows the mask")
{
    const auto batch = sample_inputs(2, 20, 20);
    const auto obs = synthetic_grid(batch, 5, 6, [](double s, int i, int m) {
        return std::pow(10.0, -(i + m)) * std::sin(3 * s + i) + 0.1 * std::cos(s * m);
    });
    std::vector<std::uint8_t> prev;
    for (double th : {0.0, 1e-8, 1e-6, 1e-4, 1e-2, 1.0}) {
        const auto g = build_r2_grid(obs, batch, th);
        if (!prev.empty())
            for (std::size_t j = 0; j < prev.size(); ++j) CHECK(g.zeroed[j] >= prev[j]);
        for (std::size_t j = 0; j < g.r2.size(); ++j) {
            CHECK(g.zeroed[j] == (g.delta[j] < th ? 1 : 0));
            if (g.zeroed[j]) CHECK(g.r2[j] == 0.0);
        }
        prev = g.zeroed;
    }
}

TEST_CASE("weights depend only on the training block")
{
    const auto batch = sample_inputs(9, 12, 12);
    SplitMix64 rng(1);
    std::vector<double> obs;
    for (double s : batch.values) obs.push_back(std::sin(2 * s) + 0.05 * rng.uniform());
    const auto w = train_readout(std::span(obs).first(12), batch.train());
    auto obs2 = obs;
    std::reverse(obs2.begin() + 12, obs2.end());
    std::rotate(obs2.begin() + 12, obs2.begin() + 15, obs2.end());
    const auto w2 = train_readout(std::span(obs2).first(12), batch.train());
    CHECK(w.w_obs == w2.w_obs);
    CHECK(w.w_const == w2.w_const);
}

TEST_CASE("subset means")
{
    auto g = filled_grid(11, 11, 1.0);
    CHECK(mean_r2(g, {9, 0.0, 5.0, false}) == 1.0);
    CHECK(mean_r2(g, {3, 1.0, 2.0, true}) == 1.0);

    // half of the window at 0: sites with even offset
    for (int i = 0; i < 11; ++i)
        for (int m = 0; m < 11; ++m) g.r2[g.index(i, m)] = (m % 2 == 1) ? 1.0 : 0.0;
    // times 0.5..5.0 => m = 1..10, half odd
    CHECK(mean_r2(g, {9, 0.0, 5.0, false}) == doctest::Approx(0.5));
    // include_lo adds the m = 0 column
    CHECK(mean_r2(g, {9, 0.0, 5.0, true}) == doctest::Approx(5.0 / 11));
    // only the central 3 sites enter
    for (int m = 0; m < 11; ++m) g.r2[g.index(0, m)] = 100.0;
    CHECK(mean_r2(g, {9, 0.0, 5.0, false}) == doctest::Approx(0.5));

    CHECK_THROWS_AS(mean_r2(g, {13, 0.0, 5.0, false}), InvalidArgument);
    CHECK_THROWS_AS(mean_r2(g, {4, 0.0, 5.0, false}), InvalidArgument);
    CHECK_THROWS_AS(mean_r2(g, {3, 2.0, 2.2, false}), InvalidArgument);
}

TEST_CASE("subset means respect pointwise domination")
{
    SplitMix64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = filled_grid(9, 21, 0.0);
        auto b = a;
        for (std::size_t j = 0; j < a.r2.size(); ++j) {
            b.r2[j] = rng.uniform();
            a.r2[j] = b.r2[j] + (1 - b.r2[j]) * rng.uniform();
        }
        const SubsetSpec sub{5, 1.0, 8.0, false};
        CHECK(mean_r2(a, sub) >= mean_r2(b, sub));
    }
}

TEST_CASE("dip location")
{
    const auto d = locate_dip({"g", {0.5, 1.0, 1.5}, {0.8, 0.3, 0.7}});
    CHECK(d.value == 1.0);
    CHECK(d.r2_mean == 0.3);
    CHECK(d.index == 1);
    CHECK(d.interior);

    const auto mono = locate_dip({"g", {0.5, 1.0, 1.5}, {0.8, 0.7, 0.6}});
    CHECK(mono.value == 1.5);
    CHECK_FALSE(mono.interior);

    const auto tie = locate_dip({"g", {1.5, 0.5, 1.0}, {0.2, 0.9, 0.2}});
    CHECK(tie.value == 1.0);

    const auto single = locate_dip({"g", {1.0}, {0.4}});
    CHECK(single.value == 1.0);
    CHECK_FALSE(single.interior);
}
