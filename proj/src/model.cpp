#include "qrp/model.hpp"

#include <cmath>

#include "qrp/error.hpp"

namespace qrp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

bool all_finite(std::initializer_list<double> xs)
{
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

void add_bonds(std::vector<PauliTerm>& out, int n, int range, double coef)
{
    if (coef == 0.0) return;
    for (int i = 0; i + range < n; ++i)
        out.push_back({coef, {{i, Axis::z}, {i + range, Axis::z}}});
}

void add_field(std::vector<PauliTerm>& out, int n, double coef)
{
    if (coef == 0.0) return;
    for (int i = 0; i < n; ++i)
        out.push_back({coef, {{i, Axis::x}}});
}

void add_cluster(std::vector<PauliTerm>& out, int n, double coef)
{
    if (coef == 0.0) return;
    for (int i = 0; i + 2 < n; ++i)
        out.push_back({coef, {{i, Axis::z}, {i + 1, Axis::x}, {i + 2, Axis::z}}});
}

} // namespace

char axis_name(Axis a)
{
    switch (a) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
    }
    return '?';
}

Axis parse_axis(std::string_view s)
{
    if (s == "x" || s == "X") return Axis::x;
    if (s == "y" || s == "Y") return Axis::y;
    if (s == "z" || s == "Z") return Axis::z;
    throw InvalidArgument("unknown Pauli axis '" + std::string(s) + "'");
}

std::string_view variant_name(Variant v)
{
    switch (v) {
    case Variant::tfim: return "tfim";
    case Variant::annni: return "annni";
    case Variant::cluster: return "cluster";
    case Variant::cluster_field: return "cluster_field";
    }
    return "?";
}

Variant parse_variant(std::string_view s)
{
    if (s == "tfim") return Variant::tfim;
    if (s == "annni") return Variant::annni;
    if (s == "cluster") return Variant::cluster;
    if (s == "cluster_field") return Variant::cluster_field;
    throw InvalidArgument("unknown model variant '" + std::string(s) + "'");
}

Variant ModelSpec::variant() const
{
    return static_cast<Variant>(couplings.index());
}

void ModelSpec::validate() const
{
    if (n_sites < 3) throw InvalidArgument("n_sites must be at least 3");
    if (n_sites % 2 == 0) throw InvalidArgument("n_sites must be odd so a central site exists");
    bool finite = std::visit(
        overloaded{
            [](const TfimCouplings& c) { return all_finite({c.J, c.g}); },
            [](const AnnniCouplings& c) { return all_finite({c.J, c.kappa, c.g}); },
            [](const ClusterCouplings& c) { return all_finite({c.J_zz, c.J_zxz}); },
            [](const ClusterFieldCouplings& c) { return all_finite({c.J_zz, c.J_zxz, c.h_x}); },
        },
        couplings);
    if (!finite) throw InvalidArgument("couplings must be finite");
}

std::vector<PauliTerm> expand_terms(const ModelSpec& spec)
{
    spec.validate();
    return chain_terms(spec.couplings, spec.n_sites);
}

std::vector<PauliTerm> chain_terms(const Couplings& couplings, int n)
{
    if (n < 2) throw InvalidArgument("a chain needs at least two sites");
    std::vector<PauliTerm> terms;
    std::visit(overloaded{
                   [&](const TfimCouplings& c) {
                       add_bonds(terms, n, 1, -c.J);
                       add_field(terms, n, c.g);
                   },
                   [&](const AnnniCouplings& c) {
                       add_bonds(terms, n, 1, -c.J);
                       add_bonds(terms, n, 2, -c.kappa);
                       add_field(terms, n, c.g);
                   },
                   [&](const ClusterCouplings& c) {
                       add_bonds(terms, n, 1, -c.J_zz);
                       add_cluster(terms, n, c.J_zxz);
                   },
                   [&](const ClusterFieldCouplings& c) {
                       add_bonds(terms, n, 1, -c.J_zz);
                       add_field(terms, n, -c.h_x);
                       add_cluster(terms, n, c.J_zxz);
                   },
               },
               couplings);
    return terms;
}

std::pair<double, double> alpha_parametrization(double J_zz, double alpha)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InvalidArgument("alpha must lie in [0, 1]");
    return {(1.0 - J_zz) * alpha, (1.0 - J_zz) * (1.0 - alpha)};
}

std::vector<std::string> parameter_names(Variant v)
{
    switch (v) {
    case Variant::tfim: return {"J", "g"};
    case Variant::annni: return {"J", "kappa", "g"};
    case Variant::cluster: return {"J_zz", "J_zxz"};
    case Variant::cluster_field: return {"J_zz", "J_zxz", "h_x", "alpha"};
    }
    return {};
}

namespace {

double* parameter_slot(Couplings& c, std::string_view name)
{
    return std::visit(
        overloaded{
            [&](TfimCouplings& t) -> double* {
                if (name == "J") return &t.J;
                if (name == "g") return &t.g;
                return nullptr;
            },
            [&](AnnniCouplings& t) -> double* {
                if (name == "J") return &t.J;
                if (name == "kappa") return &t.kappa;
                if (name == "g") return &t.g;
                return nullptr;
            },
            [&](ClusterCouplings& t) -> double* {
                if (name == "J_zz") return &t.J_zz;
                if (name == "J_zxz") return &t.J_zxz;
                return nullptr;
            },
            [&](ClusterFieldCouplings& t) -> double* {
                if (name == "J_zz") return &t.J_zz;
                if (name == "J_zxz") return &t.J_zxz;
                if (name == "h_x") return &t.h_x;
                return nullptr;
            },
        },
        c);
}

[[noreturn]] void unknown_parameter(const ModelSpec& spec, std::string_view name)
{
    throw InvalidArgument("model '" + std::string(variant_name(spec.variant())) +
                          "' has no parameter '" + std::string(name) + "'");
}

} // namespace

ModelSpec with_parameter(ModelSpec spec, std::string_view name, double value)
{
    if (name == "alpha") {
        auto* cf = std::get_if<ClusterFieldCouplings>(&spec.couplings);
        if (!cf) unknown_parameter(spec, name);
        auto [jzxz, hx] = alpha_parametrization(cf->J_zz, value);
        cf->J_zxz = jzxz;
        cf->h_x = hx;
        return spec;
    }
    double* slot = parameter_slot(spec.couplings, name);
    if (!slot) unknown_parameter(spec, name);
    *slot = value;
    return spec;
}

double get_parameter(const ModelSpec& spec, std::string_view name)
{
    if (name == "alpha") {
        const auto* cf = std::get_if<ClusterFieldCouplings>(&spec.couplings);
        if (!cf || cf->J_zz == 1.0) unknown_parameter(spec, name);
        return cf->J_zxz / (1.0 - cf->J_zz);
    }
    Couplings copy = spec.couplings;
    double* slot = parameter_slot(copy, name);
    if (!slot) unknown_parameter(spec, name);
    return *slot;
}

} // namespace qrp
