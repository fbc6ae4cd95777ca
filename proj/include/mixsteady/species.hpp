#pragma once

#include <string>

#include "mixsteady/state.hpp"

namespace mixsteady {

// Log mass fractions w_k solving
//   eps w_k - div((D_lam e^{w_k} + eps) grad w_k) + delta e^{w_k} - delta/n
//     + lam rho ubar.grad(e^{wbar_k}) / g - lam rho omega_k = source_k
// with zero normal flux. D_lam = D0 (M + lam r), rho = M + r. The diffusion
// flux is discretized as D_lam,f (Y_E - Y_P)/h + eps (w_E - w_P)/h.
struct SpeciesInputs {
    double M = 100.0;
    double lambda = 0.0;
    Regularization reg{};
    double g_val = 1.0;
    const ScalarField* r = nullptr;
    const VectorField* ubar = nullptr;
    const ScalarField* theta_bar = nullptr;
    const std::vector<ScalarField>* w_bar = nullptr;
    const std::vector<ScalarField>* source = nullptr;
};

struct SpeciesResult {
    std::vector<ScalarField> w;
    NewtonReport report;
    std::string path;  // "kirchhoff" or "newton"
};

class SpeciesSolver {
public:
    SpeciesSolver(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg);

    // Kirchhoff path at lambda = 0, direct Newton otherwise.
    SpeciesResult solve(const SpeciesInputs& in, const std::vector<ScalarField>* w0 = nullptr);
    // Direct Newton on w for any lambda.
    SpeciesResult solve_direct(const SpeciesInputs& in, const std::vector<ScalarField>* w0 = nullptr);
    // Newton on W = H(w) species by species; lambda must be 0.
    SpeciesResult solve_kirchhoff(const SpeciesInputs& in, const std::vector<ScalarField>* w0 = nullptr);
    // Drop cached factorizations so the next solve does not depend on history.
    void reset() {
        direct_.invalidate();
        kirchhoff_.invalidate();
    }

private:
    GridSpec grid_;
    MixtureSpec spec_;
    SubsolverConfig cfg_;
    NewtonSolver direct_;
    NewtonSolver kirchhoff_;
};

SpeciesResult solve_species(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg,
                            const SpeciesInputs& in);

// Residual of every species row at a given w (rows ordered as w).
std::vector<ScalarField> species_residual(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg,
                                          const SpeciesInputs& in, const std::vector<ScalarField>& w);

}  // namespace mixsteady
