#pragma once

#include <string>
#include <vector>

#include "mixsteady/state.hpp"

namespace mixsteady {

// Given data of a steady problem: body force and boundary temperature.
struct ProblemData {
    VectorField force;
    BoundaryFlux Theta;

    static ProblemData trivial(const GridSpec& g, double Theta0 = 1.0);
};

// Physical entropy production with the lambda = 1, eps = delta = 0 closures,
// split into its four nonnegative parts.
struct EntropyProduction {
    ScalarField viscous;    // 2 rho |D(u)|^2 / theta
    ScalarField thermal;    // kappa |grad theta|^2 / theta^2
    ScalarField diffusive;  // sum D |grad Y_k|^2 / Y_k
    ScalarField reactive;   // -sum rho omega_k g_k / theta
    ScalarField total;
    double min = 0.0;
    double max_abs = 0.0;
};

EntropyProduction entropy_production(const PhysicalState& s, const MixtureSpec& spec);

// raw is the physical balance expression, regularization the part that the
// eps/delta terms of the regularized system account for; residual = raw - regularization.
struct Balance {
    double residual = 0.0;
    double raw = 0.0;
    double regularization = 0.0;
};

// integral sigma + boundary integral of L (Theta - theta)/theta.
Balance entropy_balance(const PhysicalState& s, const MixtureSpec& spec, const ProblemData& data,
                        const Regularization& reg);
// Boundary integral of L (theta - Theta) + f |u|^2 minus integral rho f.u.
Balance total_energy_balance(const PhysicalState& s, const MixtureSpec& spec, const ProblemData& data,
                             const Regularization& reg);

// M^{gamma-2} ||r||_{1,p} + ||u||_{2,p} + ||theta||_{1,p} + ||Y||_{1,p}; p > 3.
double xi_norm(const PhysicalState& s, const MixtureSpec& spec, double p);

struct MassDefect {
    double l2 = 0.0;
    double w12 = 0.0;
};
MassDefect mass_defect(const PhysicalState& s);

// Integral of omega_k(theta, Y) over the domain, per species.
std::vector<double> compatibility_residual(const PhysicalState& s, const MixtureSpec& spec);

struct LedgerEntry {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

struct LedgerParams {
    Regularization reg{};
    double p = 4.0;
    double C0 = 10.0;
    double E = 4.0;
};

// Solution-norm bounds evaluated on one state. holds means lhs <= rhs; the
// M-independence verdict is a sweep-level check.
std::vector<LedgerEntry> bound_ledger(const PhysicalState& s, const MixtureSpec& spec, const LedgerParams& lp);

struct DiagnosticsReport {
    EntropyProduction sigma;
    double sigma_regularization = 0.0;  // regularization part of the entropy balance
    Balance entropy;
    Balance energy;
    double xi = 0.0;
    double xi_over_M = 0.0;
    MassDefect defect;
    std::vector<double> compat;
    std::vector<LedgerEntry> ledger;
};

DiagnosticsReport diagnose(const PhysicalState& s, const MixtureSpec& spec, const ProblemData& data,
                           const LedgerParams& lp);

}  // namespace mixsteady
