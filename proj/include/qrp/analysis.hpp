#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qrp/observables.hpp"
#include "qrp/quench.hpp"

namespace qrp {

inline constexpr double kDefaultThreshold = 1e-5;

// y = w_obs * <O> + w_const
struct ReadoutWeights {
    double w_obs = 0.0;
    double w_const = 0.0;

    double operator()(double x) const { return w_obs * x + w_const; }
};

// Least-squares fit of targets against [obs, 1] through the SVD pseudoinverse
// (relative singular-value cutoff 1e-12). A rank-deficient design, i.e. a
// constant observable, yields (0, mean(targets)).
ReadoutWeights train_readout(std::span<const double> obs, std::span<const double> targets);

// cov^2(y, s) / (var(y) var(s)). Returns 0 when var(y) <= 1e-14; throws
// InvalidArgument when var(s) is zero.
double r_squared(std::span<const double> outputs, std::span<const double> targets);

// (1/l) sum_k |x_k - mean(x)|
double average_abs_deviation(std::span<const double> obs);

struct R2Grid {
    int n_sites = 0;
    std::vector<double> times;
    double threshold = kDefaultThreshold;
    std::vector<double> r2;         // [site][time]
    std::vector<double> delta;      // [site][time], training instances only
    std::vector<std::uint8_t> zeroed; // 1 where delta < threshold

    int n_times() const { return static_cast<int>(times.size()); }
    std::size_t index(int i, int m) const { return static_cast<std::size_t>(i) * times.size() + m; }
};

// Per-cell readout: training instances fit the weights, test instances score
// them. Cells whose training deviation falls below `threshold` are forced to 0.
R2Grid build_r2_grid(const ObservableGrid& grid, const InputBatch& batch,
                     double threshold = kDefaultThreshold);

// Central window of `n_sites` spins (odd) and times t_lo < t <= t_hi, or
// t_lo <= t <= t_hi when include_lo is set.
struct SubsetSpec {
    int n_sites = 9;
    double t_lo = 0.0;
    double t_hi = 5.0;
    bool include_lo = false;
};

double mean_r2(const R2Grid& grid, const SubsetSpec& subset);

struct SweepResult {
    std::string parameter;
    std::vector<double> values;
    std::vector<double> r2_mean;
};

struct Dip {
    std::size_t index = 0;
    double value = 0.0;
    double r2_mean = 0.0;
    bool interior = false; // false when the minimum sits at the smallest or largest parameter
};

// argmin of r2_mean; ties go to the smaller parameter value.
Dip locate_dip(const SweepResult& sweep);

} // namespace qrp
