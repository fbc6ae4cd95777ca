#pragma once

#include "mixsteady/state.hpp"

namespace mixsteady {

// Data of the continuity + momentum problem
//   div(rho u) = 0,
//   lambda rho ubar.grad u - div S(rho, grad u) + grad pi(rho, theta_eff) = rho f,
// with u.n = 0 and n.S.tau + f_fric u.tau = 0 on the walls, rho = M + r and
// mean(r) = 0. Null pointers mean zero fields. The source fields are added
// to the right-hand sides (manufactured solutions only).
struct FlowInputs {
    double M = 100.0;
    double lambda = 0.0;
    const VectorField* ubar = nullptr;
    const ScalarField* theta_eff = nullptr;
    const VectorField* force = nullptr;
    const ScalarField* source_mass = nullptr;
    const VectorField* source_momentum = nullptr;
};

struct FlowResult {
    ScalarField r;
    VectorField u;
    double multiplier = 0.0;
    NewtonReport report;
};

class FlowSolver {
public:
    FlowSolver(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg);

    // Warm start from (r0, u0) when given, else from (0, 0).
    FlowResult solve(const FlowInputs& in, const ScalarField* r0 = nullptr, const VectorField* u0 = nullptr);
    void reset() { newton_.invalidate(); }

private:
    GridSpec grid_;
    MixtureSpec spec_;
    SubsolverConfig cfg_;
    NewtonSolver newton_;
};

FlowResult solve_flow(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg, const FlowInputs& in);

// Discrete residual rows (continuity, x-momentum, y-momentum) per node with
// multiplier c. Used by tests and diagnostics.
struct FlowResidual {
    ScalarField mass;
    VectorField momentum;
};
FlowResidual flow_residual(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg,
                           const FlowInputs& in, const ScalarField& r, const VectorField& u, double c = 0.0);

}  // namespace mixsteady
