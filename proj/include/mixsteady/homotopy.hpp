#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mixsteady/diagnostics.hpp"
#include "mixsteady/flow.hpp"
#include "mixsteady/species.hpp"
#include "mixsteady/thermal.hpp"

namespace mixsteady {

std::vector<double> uniform_lambda_schedule(int steps);
std::vector<double> log_delta_schedule(double first, double last, int steps);

struct ContinuationParams {
    double M = 100.0;
    double M_min = 10.0;
    std::vector<double> lambda_schedule = uniform_lambda_schedule(11);
    std::vector<double> delta_schedule = log_delta_schedule(0.1, 1e-3, 5);
    double C0 = 10.0;
    double E = 4.0;
    double C_f = 8.0;
    double damping = 0.5;
    double fp_tol = 1e-8;
    int max_fp = 200;
    double p = 4.0;
    SubsolverConfig solver{};

    // Every violated constraint, not only the first.
    std::vector<Violation> violations() const;
    void validate() const;
};

// M^{gamma-2} ||dr||_{1,p} + ||du||_{1,p} + ||dtheta||_{1,p} + ||dY||_{1,p}.
double composite_distance(const FieldState& a, const FieldState& b, const MixtureSpec& spec, double p);

struct MembershipVerdict {
    std::string set;       // "M_u", "M_r", "M_theta", "M_Y"
    std::string quantity;
    double value = 0.0;
    double bound = 0.0;
    bool holds = false;
};

std::vector<MembershipVerdict> check_membership(const FieldState& s, const MixtureSpec& spec,
                                                const ContinuationParams& params);

struct SubsolveSummary {
    double flow_residual = 0.0;
    double species_residual = 0.0;
    double thermal_residual = 0.0;
    int newton_iterations = 0;
};

struct StepRecord {
    double lambda = 0.0;
    double delta = 0.0;
    double eps = 0.0;
    int iterations = 0;
    double update_norm = 0.0;
    std::vector<double> update_history;
    double g_val = 1.0;
    SubsolveSummary subsolves;
    std::vector<MembershipVerdict> membership;
    DiagnosticsReport diagnostics;
};

struct FailureInfo {
    SolverFailure kind = SolverFailure::NonConvergence;
    std::string message;
    double lambda = 0.0;
    double delta = 0.0;
};

struct SolverReport {
    std::vector<StepRecord> steps;
    std::vector<std::pair<double, double>> defect_trace;  // (delta, ||sum Y - 1||_2) at lambda = 1
    std::optional<FailureInfo> failure;
    bool completed() const { return !failure.has_value(); }
};

// Owns the three subsolvers so factorizations are reused across applications.
class Homotopy {
public:
    Homotopy(const GridSpec& g, const MixtureSpec& spec, const ProblemData& data, const ContinuationParams& params);

    // One application of F_lambda to the barred state.
    FieldState apply(const FieldState& bar, double lambda, const Regularization& reg,
                     SubsolveSummary* summary = nullptr, double* g_val = nullptr);

    struct SolveAt {
        FieldState state;
        StepRecord record;
    };
    // Damped fixed-point iteration from warm; throws SolverError on failure.
    SolveAt solve_at(double lambda, double delta, const FieldState& warm);

    const GridSpec& grid() const { return grid_; }
    const MixtureSpec& spec() const { return spec_; }
    const ProblemData& data() const { return data_; }
    const ContinuationParams& params() const { return params_; }

private:
    GridSpec grid_;
    MixtureSpec spec_;
    ProblemData data_;
    ContinuationParams params_;
    FlowSolver flow_;
    SpeciesSolver species_;
    ThermalSolver thermal_;
};

struct ConstructionResult {
    FieldState state;  // last accepted state
    SolverReport report;
};

// delta outer, lambda inner, eps = delta^3. A failure ends the run and is
// recorded in the report next to all accepted steps.
ConstructionResult run_construction(const GridSpec& g, const MixtureSpec& spec, const ProblemData& data,
                                    const ContinuationParams& params, const FieldState* warm = nullptr);

LedgerParams ledger_params(const ContinuationParams& params, double delta);

}  // namespace mixsteady
