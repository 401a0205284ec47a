#include "qrp/analysis.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>

#include <Eigen/SVD>

#include "qrp/error.hpp"

namespace qrp {

namespace {

constexpr double kSingularCutoff = 1e-12;
constexpr double kConstantOutputVariance = 1e-14;
constexpr double kTimeSlack = 1e-9;

double mean(std::span<const double> x)
{
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

} // namespace

ReadoutWeights train_readout(std::span<const double> obs, std::span<const double> targets)
{
    if (obs.size() != targets.size()) throw InvalidArgument("observable and target counts differ");
    if (obs.size() < 2) throw InvalidArgument("need at least two training instances");
    const auto l = static_cast<Eigen::Index>(obs.size());
    Eigen::MatrixXd design(l, 2);
    for (Eigen::Index k = 0; k < l; ++k) {
        design(k, 0) = obs[k];
        design(k, 1) = 1.0;
    }
    Eigen::Map<const Eigen::VectorXd> s(targets.data(), l);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv[1] <= kSingularCutoff * sv[0]) return {0.0, mean(targets)};

    const Eigen::Vector2d w = svd.matrixV() * sv.cwiseInverse().asDiagonal() * (svd.matrixU().transpose() * s);
    return {w[0], w[1]};
}

double r_squared(std::span<const double> outputs, std::span<const double> targets)
{
    if (outputs.size() != targets.size()) throw InvalidArgument("output and target counts differ");
    if (outputs.size() < 2) throw InvalidArgument("need at least two test instances");
    const double my = mean(outputs), ms = mean(targets);
    double cov = 0.0, vy = 0.0, vs = 0.0;
    for (std::size_t k = 0; k < outputs.size(); ++k) {
        const double dy = outputs[k] - my, ds = targets[k] - ms;
        cov += dy * ds;
        vy += dy * dy;
        vs += ds * ds;
    }
    const double n = static_cast<double>(outputs.size());
    cov /= n;
    vy /= n;
    vs /= n;
    if (vs == 0.0) throw InvalidArgument("test targets have zero variance");
    if (vy <= kConstantOutputVariance) return 0.0;
    // Cauchy-Schwarz bounds this by 1; min() only absorbs rounding.
    return std::min(1.0, (cov * cov) / (vy * vs));
}

double average_abs_deviation(std::span<const double> obs)
{
    if (obs.size() < 2) throw InvalidArgument("need at least two values");
    const double m = mean(obs);
    double acc = 0.0;
    for (double x : obs) acc += std::abs(x - m);
    return acc / static_cast<double>(obs.size());
}

R2Grid build_r2_grid(const ObservableGrid& grid, const InputBatch& batch, double threshold)
{
    if (static_cast<std::size_t>(grid.n_instances) != batch.size())
        throw InvalidArgument("observable grid and input batch disagree on instance count");
    if (!(threshold >= 0.0)) throw InvalidArgument("threshold must be non-negative");
    const auto train_s = batch.train();
    const auto test_s = batch.test();

    R2Grid out;
    out.n_sites = grid.n_sites;
    out.times = grid.times;
    out.threshold = threshold;
    const std::size_t cells = static_cast<std::size_t>(grid.n_sites) * grid.times.size();
    out.r2.assign(cells, 0.0);
    out.delta.assign(cells, 0.0);
    out.zeroed.assign(cells, 0);

    const auto n_cells = static_cast<long>(cells);
    const int n_times = grid.n_times();
#pragma omp parallel
    {
        std::vector<double> x_train(batch.n_train), x_test(batch.n_test), y_test(batch.n_test);
#pragma omp for schedule(static)
        for (long c = 0; c < n_cells; ++c) {
            const int i = static_cast<int>(c / n_times);
            const int m = static_cast<int>(c % n_times);
            for (int k = 0; k < batch.n_train; ++k) x_train[k] = grid.at(k, i, m);
            for (int k = 0; k < batch.n_test; ++k) x_test[k] = grid.at(batch.n_train + k, i, m);

            const double d = average_abs_deviation(x_train);
            out.delta[c] = d;
            if (d < threshold) {
                out.zeroed[c] = 1;
                continue;
            }
            const ReadoutWeights w = train_readout(x_train, train_s);
            for (int k = 0; k < batch.n_test; ++k) y_test[k] = w(x_test[k]);
            out.r2[c] = r_squared(y_test, test_s);
        }
    }
    return out;
}

double mean_r2(const R2Grid& grid, const SubsetSpec& subset)
{
    if (subset.n_sites < 1 || subset.n_sites % 2 == 0) throw InvalidArgument("site window must be odd");
    if (subset.n_sites > grid.n_sites) throw InvalidArgument("site window wider than the chain");
    if (grid.times.empty() || subset.t_hi > grid.times.back() + kTimeSlack || subset.t_lo < -kTimeSlack)
        throw InvalidArgument("time window outside the recorded range");

    const int center = (grid.n_sites - 1) / 2;
    const int half = (subset.n_sites - 1) / 2;
    double sum = 0.0;
    long count = 0;
    for (int m = 0; m < grid.n_times(); ++m) {
        const double t = grid.times[m];
        const bool above_lo = subset.include_lo ? t >= subset.t_lo - kTimeSlack : t > subset.t_lo + kTimeSlack;
        if (!above_lo || t > subset.t_hi + kTimeSlack) continue;
        for (int i = center - half; i <= center + half; ++i) {
            sum += grid.r2[grid.index(i, m)];
            ++count;
        }
    }
    if (count == 0) throw InvalidArgument("subset selects no grid cells");
    return sum / static_cast<double>(count);
}

Dip locate_dip(const SweepResult& sweep)
{
    if (sweep.values.empty() || sweep.values.size() != sweep.r2_mean.size())
        throw InvalidArgument("sweep needs matching, non-empty value and r2 arrays");
    std::size_t best = 0;
    for (std::size_t j = 1; j < sweep.values.size(); ++j) {
        const double r = sweep.r2_mean[j], rb = sweep.r2_mean[best];
        if (r < rb || (r == rb && sweep.values[j] < sweep.values[best])) best = j;
    }
    const auto [lo, hi] = std::minmax_element(sweep.values.begin(), sweep.values.end());
    Dip dip;
    dip.index = best;
    dip.value = sweep.values[best];
    dip.r2_mean = sweep.r2_mean[best];
    dip.interior = sweep.values.size() >= 3 && dip.value != *lo && dip.value != *hi;
    return dip;
}

} // namespace qrp
