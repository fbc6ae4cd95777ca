#pragma once

#include "mixsteady/state.hpp"

namespace mixsteady {

// z = log theta solving
//   -div((delta + e^z) kbar grad z) = S:grad u - lam rho (thetabar/g) div u
//       - lam rho u.grad e_m - lam div(sum_k thetabar c_pk F_k) + source
// with kbar = kappa0 (1 + e^{3z}) (M + lam r) and the Robin condition
//   -(delta + e^z) kbar grad z . n = L0 (1 + e^{3z}) (M + lam r)(e^z - Theta) + eps z + g_b.
// The diffusion flux is kappa0 (M + lam r)_f (Phi(z_E) - Phi(z_P))/h with
// Phi' = (delta + e^z)(1 + e^{3z}).
struct ThermalInputs {
    double M = 100.0;
    double lambda = 0.0;
    Regularization reg{};
    double g_val = 1.0;
    const ScalarField* r = nullptr;
    const VectorField* u = nullptr;
    const ScalarField* z_bar = nullptr;
    const std::vector<ScalarField>* w_bar = nullptr;
    const std::vector<ScalarField>* w = nullptr;
    const BoundaryFlux* Theta = nullptr;
    const BoundaryFlux* boundary_source = nullptr;
    const ScalarField* source = nullptr;
};

struct ThermalResult {
    ScalarField z;
    NewtonReport report;
};

// Right-hand side terms evaluated on data only.
struct ThermalSource {
    ScalarField viscous;      // S:grad u
    ScalarField compression;  // -lam rho thetabar/g div u
    ScalarField convection;   // -lam rho u.grad e_m
    ScalarField diffusion;    // -lam div(sum thetabar c_pk F_k)
    ScalarField total;
};

ThermalSource thermal_source(const GridSpec& g, const MixtureSpec& spec, const ThermalInputs& in);

double thermal_potential(double z, double delta);

class ThermalSolver {
public:
    ThermalSolver(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg);
    ThermalResult solve(const ThermalInputs& in, const ScalarField* z0 = nullptr);
    void reset() { newton_.invalidate(); }

private:
    GridSpec grid_;
    MixtureSpec spec_;
    SubsolverConfig cfg_;
    NewtonSolver newton_;
};

ThermalResult solve_thermal(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg,
                            const ThermalInputs& in);

ScalarField thermal_residual(const GridSpec& g, const MixtureSpec& spec, const ThermalInputs& in,
                             const ScalarField& z);

// Outward boundary flux L_lam (e^z - Theta) + eps z (+ g_b) per side.
BoundaryFlux robin_flux(const GridSpec& g, const MixtureSpec& spec, const ThermalInputs& in, const ScalarField& z);

}  // namespace mixsteady
