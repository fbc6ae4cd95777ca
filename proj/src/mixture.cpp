#include "mixsteady/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mixsteady {

const char* to_string(SolverFailure kind) {
    switch (kind) {
        case SolverFailure::NonConvergence: return "NonConvergence";
        case SolverFailure::DensityExit: return "DensityExit";
        case SolverFailure::SingularLinearSystem: return "SingularLinearSystem";
        case SolverFailure::OverflowGuard: return "OverflowGuard";
        case SolverFailure::MaxIterations: return "MaxIterations";
    }
    return "Unknown";
}

static std::string join_violations(const std::vector<Violation>& v) {
    std::string s = "validation failed:";
    for (const auto& x : v) s += " [" + x.field + ": " + x.constraint + "]";
    return s;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

void MixtureSpec::validate() const {
    std::vector<Violation> v;
    if (n < 2) v.push_back({"n", ">= 2 required"});
    if (!(gamma > 1.0)) v.push_back({"gamma", "> 1 required"});
    if (static_cast<int>(c_v.size()) != n) v.push_back({"c_v", "exactly n entries required"});
    for (double c : c_v)
        if (!(c > 0.0)) {
            v.push_back({"c_v", "> 0 required"});
            break;
        }
    if (!(D0 > 0.0)) v.push_back({"D0", "> 0 required"});
    if (!(kappa0 > 0.0)) v.push_back({"kappa0", "> 0 required"});
    if (!(L0 > 0.0)) v.push_back({"L0", "> 0 required"});
    if (!(Lambda >= 0.0)) v.push_back({"Lambda", ">= 0 required"});
    if (!(B_omega > 0.0)) v.push_back({"B_omega", "> 0 required"});
    if (!(f_fric >= 0.0)) v.push_back({"f_fric", ">= 0 required"});
    if (!v.empty()) throw ValidationError(std::move(v));
}

double pressure(const ThermoPoint& pt, const MixtureSpec& spec) {
    return pressure(pt.rho, pt.theta, spec.gamma);
}

double internal_energy(const ThermoPoint& pt, const MixtureSpec& spec) {
    double molecular = 0.0;
    for (int k = 0; k < spec.n; ++k) molecular += spec.c_v[k] * pt.Y[k];
    return std::pow(pt.rho, spec.gamma - 1.0) / (spec.gamma - 1.0) + pt.theta * molecular;
}

GibbsData entropy_gibbs(const ThermoPoint& pt, const MixtureSpec& spec) {
    if (!(pt.theta > 0.0)) throw DomainError("entropy_gibbs: theta must be positive");
    const int n = spec.n;
    GibbsData out;
    out.s_k.resize(n);
    out.h_k.resize(n);
    out.g_k.resize(n);
    const double log_theta = std::log(pt.theta);
    for (int k = 0; k < n; ++k) {
        const double partial_density = pt.rho * pt.Y[k];
        if (!(partial_density > 0.0))
            throw DomainError("entropy_gibbs: rho*Y_k must be positive (k=" + std::to_string(k) + ")");
        out.s_k[k] = spec.c_v[k] * log_theta - std::log(partial_density);
        out.h_k[k] = spec.c_p(k) * pt.theta;
        out.g_k[k] = out.h_k[k] - pt.theta * out.s_k[k];
        out.s += pt.Y[k] * out.s_k[k];
        out.g += pt.Y[k] * out.g_k[k];
    }
    return out;
}

std::vector<double> production_rates(double theta, std::span<const double> Y, const MixtureSpec& spec) {
    std::vector<double> omega(static_cast<std::size_t>(spec.n));
    production_rates<double>(theta, Y.data(), omega.data(), spec);
    return omega;
}

Transport transport_coefficients(const ThermoPoint& pt, const MixtureSpec& spec) {
    const double growth = 1.0 + std::pow(pt.theta, MixtureSpec::alpha);
    return {spec.kappa0 * pt.rho * growth, spec.D0 * pt.rho, spec.L0 * pt.rho * growth};
}

Transport blended_coefficients(const ThermoPoint& pt, double M, double lambda, const MixtureSpec& spec) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("blended_coefficients: lambda outside [0,1]");
    const Transport phys = transport_coefficients(pt, spec);
    const double growth = 1.0 + std::pow(pt.theta, MixtureSpec::alpha);
    const double kappa_anchor = spec.kappa0 * M * growth;
    const double D_anchor = spec.D0 * M;
    const double L_anchor = spec.L0 * M * growth;
    return {kappa_anchor + lambda * (phys.kappa - kappa_anchor),
            D_anchor + lambda * (phys.D - D_anchor),
            L_anchor + lambda * (phys.L - L_anchor)};
}

Tensor2 viscous_stress(double rho, const Tensor2& grad_u) {
    Tensor2 s{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s[i][j] = rho * (grad_u[i][j] + grad_u[j][i]);
    return s;
}

double contract(const Tensor2& a, const Tensor2& b) {
    double c = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c += a[i][j] * b[i][j];
    return c;
}

Fluxes fluxes(const ThermoPoint& pt, const FluxInputs& in, const MixtureSpec& spec) {
    const int n = spec.n;
    const Transport tr = transport_coefficients(pt, spec);
    Fluxes out;
    out.F.resize(n);
    out.J.resize(n);
    out.q = {-tr.kappa * in.grad_theta[0], -tr.kappa * in.grad_theta[1]};
    out.Q = out.q;
    for (int k = 0; k < n; ++k) {
        const Vec2& g = in.grad_Y[k];
        out.F[k] = {-tr.D * g[0], -tr.D * g[1]};
        const double h = spec.c_p(k) * pt.theta;
        out.Q[0] += h * out.F[k][0];
        out.Q[1] += h * out.F[k][1];
        if (!(pt.Y[k] > 0.0)) throw DomainError("fluxes: Y_k must be positive to form J_k");
        const double coeff = in.D_lambda + (in.eps + in.delta * pt.Y[k]) / pt.Y[k];
        out.J[k] = {-coeff * g[0], -coeff * g[1]};
    }
    return out;
}

}  // namespace mixsteady
