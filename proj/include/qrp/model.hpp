#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qrp {

enum class Axis : std::uint8_t { x = 0, y = 1, z = 2 };

char axis_name(Axis a);
Axis parse_axis(std::string_view s);

enum class Variant { tfim, annni, cluster, cluster_field };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view s);

// H = -J sum Z_i Z_{i+1} + g sum X_i
struct TfimCouplings {
    double J = 1.0;
    double g = 1.0;
};

// H = -J sum Z_i Z_{i+1} - kappa sum Z_i Z_{i+2} + g sum X_i
struct AnnniCouplings {
    double J = 1.0;
    double kappa = 0.5;
    double g = 1.0;
};

// H = -J_zz sum Z_i Z_{i+1} + J_zxz sum Z_i X_{i+1} Z_{i+2}
struct ClusterCouplings {
    double J_zz = 1.0;
    double J_zxz = 1.0;
};

// H = sum [ -J_zz Z_i Z_{i+1} - h_x X_i + J_zxz Z_i X_{i+1} Z_{i+2} ]
struct ClusterFieldCouplings {
    double J_zz = 0.1;
    double J_zxz = 0.45;
    double h_x = 0.45;
};

using Couplings =
    std::variant<TfimCouplings, AnnniCouplings, ClusterCouplings, ClusterFieldCouplings>;

// Open-boundary chain of an odd number of spins; the quench acts on the
// central site (n_sites - 1) / 2.
struct ModelSpec {
    int n_sites = 13;
    Couplings couplings = TfimCouplings{};

    Variant variant() const;
    int center() const { return (n_sites - 1) / 2; }
    // Throws InvalidArgument on even or too-short chains and non-finite couplings.
    void validate() const;
};

struct PauliFactor {
    int site;
    Axis axis;

    bool operator==(const PauliFactor&) const = default;
};

// coefficient * prod_f sigma^{f.axis}_{f.site}; sites strictly increasing.
struct PauliTerm {
    double coefficient;
    std::vector<PauliFactor> factors;

    bool operator==(const PauliTerm&) const = default;
};

// Expands the Hamiltonian into Pauli strings. Terms whose coupling is exactly
// zero are omitted.
std::vector<PauliTerm> expand_terms(const ModelSpec& spec);

// Same expansion for any open chain of n_sites >= 2, without the odd-length
// requirement that the quench imposes on ModelSpec.
std::vector<PauliTerm> chain_terms(const Couplings& couplings, int n_sites);

// Cluster-in-field parametrization: returns (J_zxz, h_x) =
// ((1 - J_zz) alpha, (1 - J_zz)(1 - alpha)).
std::pair<double, double> alpha_parametrization(double J_zz, double alpha);

// Names accepted by with_parameter for a variant. ClusterField also accepts
// "alpha", which rewrites J_zxz and h_x through alpha_parametrization.
std::vector<std::string> parameter_names(Variant v);
ModelSpec with_parameter(ModelSpec spec, std::string_view name, double value);
double get_parameter(const ModelSpec& spec, std::string_view name);

// Position relative to the quenched site, as used in exported tables.
inline int site_offset(int site, int n_sites) { return site - (n_sites - 1) / 2; }

} // namespace qrp
