#include "qrp/quench.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qrp/error.hpp"
#include "qrp/random.hpp"

namespace qrp {

std::string_view background_name(Background b)
{
    return b == Background::all_up ? "all_up" : "all_plus_y";
}

Background parse_background(std::string_view s)
{
    if (s == "all_up") return Background::all_up;
    if (s == "all_plus_y") return Background::all_plus_y;
    throw InvalidArgument("unknown background '" + std::string(s) + "'");
}

std::string_view encoding_name(Encoding e)
{
    return e == Encoding::x_basis ? "x_basis" : "y_basis";
}

Encoding parse_encoding(std::string_view s)
{
    if (s == "x_basis") return Encoding::x_basis;
    if (s == "y_basis") return Encoding::y_basis;
    throw InvalidArgument("unknown encoding '" + std::string(s) + "'");
}

void QuenchConfig::validate() const
{
    const bool ok = (background == Background::all_up && encoding == Encoding::x_basis) ||
                    (background == Background::all_plus_y && encoding == Encoding::y_basis);
    if (!ok) throw InvalidArgument("quench background and encoding do not form a supported pair");
}

InputBatch sample_inputs(std::uint64_t seed, int n_train, int n_test)
{
    if (n_train < 2 || n_test < 2) throw InvalidArgument("need at least two training and two test instances");
    InputBatch batch{seed, n_train, n_test, {}};
    batch.values.resize(static_cast<std::size_t>(n_train) + n_test);
    SplitMix64 rng(seed);
    for (auto& v : batch.values) v = rng.uniform();
    return batch;
}

std::array<cplx, 2> local_state(double s, Encoding encoding)
{
    if (!(s >= 0.0 && s <= 1.0)) throw InvalidArgument("input value must lie in [0, 1]");
    const double a = std::sqrt(1.0 - s);
    const double b = std::sqrt(s);
    // |+> = (|up> + u|down>)/sqrt2, |-> = (|up> - u|down>)/sqrt2 with u = 1 or i
    const cplx u = encoding == Encoding::x_basis ? cplx{1, 0} : cplx{0, 1};
    return {cplx{(a + b) / std::numbers::sqrt2}, (a - b) / std::numbers::sqrt2 * u};
}

std::array<cplx, 2> background_state(Background background)
{
    if (background == Background::all_up) return {cplx{1}, cplx{0}};
    const double h = 1.0 / std::numbers::sqrt2;
    return {cplx{h}, cplx{0, h}};
}

namespace {

void check_chain(int n_sites)
{
    if (n_sites < 3 || n_sites % 2 == 0) throw InvalidArgument("quench needs an odd chain of at least 3 sites");
}

StateVector with_center(int n_sites, Background background, std::array<cplx, 2> center)
{
    std::vector<std::array<cplx, 2>> sites(n_sites, background_state(background));
    sites[(n_sites - 1) / 2] = center;
    return StateVector::product(sites);
}

} // namespace

StateVector build_initial_state(double s, int n_sites, const QuenchConfig& config)
{
    config.validate();
    check_chain(n_sites);
    return with_center(n_sites, config.background, local_state(s, config.encoding));
}

std::array<StateVector, 2> branch_states(int n_sites, const QuenchConfig& config)
{
    config.validate();
    check_chain(n_sites);
    return {with_center(n_sites, config.background, {cplx{1}, cplx{0}}),
            with_center(n_sites, config.background, {cplx{0}, cplx{1}})};
}

} // namespace qrp
