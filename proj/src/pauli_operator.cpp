#include "qrp/pauli_operator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qrp/error.hpp"

namespace qrp {

void check_terms(std::span<const PauliTerm> terms, int n_sites)
{
    for (const auto& t : terms) {
        if (t.factors.empty()) throw InvalidArgument("Pauli term without factors");
        int prev = -1;
        for (const auto& f : t.factors) {
            if (f.site < 0 || f.site >= n_sites)
                throw InvalidArgument("Pauli factor on site " + std::to_string(f.site) +
                                      " outside a chain of " + std::to_string(n_sites));
            if (f.site <= prev) throw InvalidArgument("Pauli factor sites must be strictly increasing");
            prev = f.site;
        }
    }
}

PauliOperator::PauliOperator(std::span<const PauliTerm> terms, int n_sites) : n_sites_(n_sites)
{
    if (n_sites < 1 || n_sites > 40) throw InvalidArgument("unsupported chain length");
    check_terms(terms, n_sites);

    std::vector<std::pair<std::uint64_t, Entry>> diag_terms;
    for (const auto& t : terms) {
        std::uint64_t flip = 0, sign = 0;
        int n_y = 0;
        for (const auto& f : t.factors) {
            std::uint64_t bit = std::uint64_t{1} << f.site;
            switch (f.axis) {
            case Axis::x: flip |= bit; break;
            case Axis::y: flip |= bit; sign |= bit; ++n_y; break;
            case Axis::z: sign |= bit; break;
            }
        }
        static const cplx i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        Entry e{t.coefficient * i_pow[n_y % 4], sign};
        norm_bound_ += std::abs(t.coefficient);
        if (flip == 0) {
            diag_terms.emplace_back(flip, e);
            continue;
        }
        auto it = std::find_if(groups_.begin(), groups_.end(),
                               [&](const FlipGroup& g) { return g.flip == flip; });
        if (it == groups_.end()) groups_.push_back({flip, {e}});
        else it->entries.push_back(e);
    }

    diagonal_.assign(dim(), 0.0);
    for (const auto& [flip, e] : diag_terms) {
        const double c = e.coefficient.real();
        for (std::size_t x = 0; x < diagonal_.size(); ++x)
            diagonal_[x] += (std::popcount(x & e.sign_mask) & 1) ? -c : c;
    }
}

} // namespace qrp
