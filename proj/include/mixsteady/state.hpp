#pragma once

#include <vector>

#include "mixsteady/grid.hpp"
#include "mixsteady/mixture.hpp"
#include "mixsteady/sparse_newton.hpp"

namespace mixsteady {

// Discrete unknowns: density perturbation r (rho = M + r, mean zero),
// velocity u, z = log theta, w_k = log Y_k.
struct FieldState {
    GridSpec grid;
    double M = 100.0;
    ScalarField r;
    VectorField u;
    ScalarField z;
    std::vector<ScalarField> w;

    // (r, u, z, w) = (0, 0, log theta0, log(1/n)).
    static FieldState initial(const GridSpec& g, double M, int n, double theta0);

    ScalarField rho() const;
    ScalarField theta() const;
    std::vector<ScalarField> Y() const;
    bool finite() const;
};

// Physical variables as written to disk. Diagnostics take this form so that
// recomputing them from saved files reproduces the same bits.
struct PhysicalState {
    GridSpec grid;
    double M = 100.0;
    ScalarField r;
    VectorField u;
    ScalarField theta;
    std::vector<ScalarField> Y;

    static PhysicalState from(const FieldState& s);
    FieldState to_fields() const;
};

enum class ConvectionScheme { Upwind, Centered };
enum class ReactionCoupling { Implicit, Barred };

struct SubsolverConfig {
    NewtonOptions newton{};
    ConvectionScheme convection = ConvectionScheme::Upwind;
    ReactionCoupling coupling = ReactionCoupling::Implicit;
    bool reuse_factorization = true;

    void validate() const;
};

// Regularization pair with eps = delta^3 tied by construction.
struct Regularization {
    double delta = 0.1;
    double eps = 1e-3;
    static Regularization from_delta(double delta) { return {delta, delta * delta * delta}; }
};

double mean(const GridSpec& g, std::span<const double> f);
void project_mean_zero(const GridSpec& g, ScalarField& f);

}  // namespace mixsteady
