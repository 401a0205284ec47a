#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qrp/state.hpp"

namespace qrp {

enum class Background { all_up, all_plus_y };
enum class Encoding { x_basis, y_basis };

std::string_view background_name(Background b);
Background parse_background(std::string_view s);
std::string_view encoding_name(Encoding e);
Encoding parse_encoding(std::string_view s);

// Allowed pairs: (all_up, x_basis) and (all_plus_y, y_basis).
struct QuenchConfig {
    Background background = Background::all_up;
    Encoding encoding = Encoding::x_basis;

    void validate() const;
};

struct InputBatch {
    std::uint64_t seed = 0;
    int n_train = 128;
    int n_test = 128;
    std::vector<double> values; // train block first, then test block

    std::size_t size() const { return values.size(); }
    std::span<const double> train() const { return std::span(values).first(n_train); }
    std::span<const double> test() const { return std::span(values).subspan(n_train); }
};

inline constexpr std::string_view kInputPrng = "splitmix64-v1";

// i.i.d. uniform [0, 1) inputs; identical seed gives an identical batch.
InputBatch sample_inputs(std::uint64_t seed, int n_train, int n_test);

// Amplitudes (up, down) of sqrt(1-s)|+> + sqrt(s)|->, where |+-> are the x
// eigenstates (x_basis) or the y eigenstates (y_basis).
std::array<cplx, 2> local_state(double s, Encoding encoding);
std::array<cplx, 2> background_state(Background background);

// Product state with the quenched spin on the central site and every other
// site in the background state.
StateVector build_initial_state(double s, int n_sites, const QuenchConfig& config);

// The product states with the central spin pinned to |up> and |down>. Any
// initial state is local_state(s)[0] * up + local_state(s)[1] * down.
std::array<StateVector, 2> branch_states(int n_sites, const QuenchConfig& config);

} // namespace qrp
