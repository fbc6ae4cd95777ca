#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "mixsteady/dual.hpp"
#include "mixsteady/errors.hpp"

namespace mixsteady {

// Mixture constants. Molar masses are all 1, so c_p = c_v + 1 exactly.
struct MixtureSpec {
    int n = 2;
    double gamma = 1.4;
    std::vector<double> c_v{1.5, 2.5};
    double D0 = 1.0;
    double kappa0 = 1.0;
    double L0 = 1.0;
    double Lambda = 1.0;
    double B_omega = 100.0;
    double f_fric = 0.0;

    // Temperature exponent of kappa and L.
    static constexpr double alpha = 3.0;

    double c_p(int k) const { return c_v[static_cast<std::size_t>(k)] + 1.0; }

    // Throws ValidationError listing every violated constraint.
    void validate() const;
};

struct ThermoPoint {
    double rho = 1.0;
    double theta = 1.0;
    std::vector<double> Y;
};

using Vec2 = std::array<double, 2>;
using Tensor2 = std::array<std::array<double, 2>, 2>;

template <class T>
T pressure(const T& rho, const T& theta, double gamma) {
    using std::pow;
    return pow(rho, gamma) + rho * theta;
}

double pressure(const ThermoPoint& pt, const MixtureSpec& spec);

/// Specific internal energy: cold part rho^(gamma-1)/(gamma-1) plus theta * sum c_vk Y_k.
double internal_energy(const ThermoPoint& pt, const MixtureSpec& spec);

struct GibbsData {
    std::vector<double> s_k;
    double s = 0.0;
    std::vector<double> h_k;
    std::vector<double> g_k;
    double g = 0.0;
};

GibbsData entropy_gibbs(const ThermoPoint& pt, const MixtureSpec& spec);

// Production rates from the scalar-rescaled affinity model
//   omega_k = -Lambda * s(v) * v_k,  v_k = (g_k - mean_j g_j) / theta,
//   s(v) = min(1, B_omega / max_k |v_k|).
// The log(rho) part of g_k cancels in the differences, so only theta and Y
// enter. The last rate is the negated left-to-right sum of the others, so a
// left-to-right sum over all k is exactly zero.
template <class T>
void production_rates(const T& theta, const T* Y, T* omega, const MixtureSpec& spec) {
    using std::abs;
    using std::log;
    const int n = spec.n;
    if (!(value_of(theta) > 0.0)) throw DomainError("production_rates: theta must be positive");
    for (int k = 0; k < n; ++k)
        if (!(value_of(Y[k]) > 0.0)) throw DomainError("production_rates: Y_k must be positive");

    const T log_theta = log(theta);
    // g_k / theta without the log(rho) term.
    T mean = T(0.0);
    for (int k = 0; k < n; ++k) {
        omega[k] = T(spec.c_p(k)) - T(spec.c_v[static_cast<std::size_t>(k)]) * log_theta + log(Y[k]);
        mean += omega[k];
    }
    mean = mean / T(static_cast<double>(n));
    T partial = T(0.0);
    for (int k = 0; k < n - 1; ++k) {
        omega[k] = omega[k] - mean;
        partial += omega[k];
    }
    omega[n - 1] = -partial;

    double vmax = 0.0;
    for (int k = 0; k < n; ++k) vmax = std::max(vmax, std::abs(value_of(omega[k])));
    T scale = T(1.0);
    if (vmax > spec.B_omega) {
        T amax = T(0.0);
        for (int k = 0; k < n; ++k) {
            const T a = abs(omega[k]);
            if (value_of(a) >= value_of(amax)) amax = a;
        }
        scale = T(spec.B_omega) / amax;
    }
    T sum = T(0.0);
    for (int k = 0; k < n - 1; ++k) {
        omega[k] = -T(spec.Lambda) * scale * omega[k];
        sum += omega[k];
    }
    omega[n - 1] = -sum;
}

std::vector<double> production_rates(double theta, std::span<const double> Y, const MixtureSpec& spec);

struct Transport {
    double kappa = 0.0;
    double D = 0.0;
    double L = 0.0;
};

// kappa = kappa0 rho (1 + theta^3), D = D0 rho, L = L0 rho (1 + theta^3).
Transport transport_coefficients(const ThermoPoint& pt, const MixtureSpec& spec);

// Affine blend between the constant-density anchor (lambda = 0) and the
// physical coefficients (lambda = 1).
Transport blended_coefficients(const ThermoPoint& pt, double M, double lambda, const MixtureSpec& spec);

// grad_u[i][j] = d u_i / d x_j. Returns S = 2 rho D(u).
Tensor2 viscous_stress(double rho, const Tensor2& grad_u);
double contract(const Tensor2& a, const Tensor2& b);

struct FluxInputs {
    Vec2 grad_theta{0.0, 0.0};
    std::vector<Vec2> grad_Y;
    double D_lambda = 0.0;
    double eps = 0.0;
    double delta = 0.0;
};

struct Fluxes {
    std::vector<Vec2> F;  // Fick fluxes -D grad Y_k
    Vec2 q{0.0, 0.0};     // Fourier flux
    Vec2 Q{0.0, 0.0};     // q + sum h_k F_k
    std::vector<Vec2> J;  // regularized fluxes
};

Fluxes fluxes(const ThermoPoint& pt, const FluxInputs& in, const MixtureSpec& spec);

inline double cap_function(double x, double C0) { return std::max(1.0, x / C0); }

}  // namespace mixsteady
