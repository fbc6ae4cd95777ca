#include "mixsteady/homotopy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mixsteady {

std::vector<double> uniform_lambda_schedule(int steps) {
    std::vector<double> s(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) s[i] = steps == 1 ? 1.0 : static_cast<double>(i) / (steps - 1);
    return s;
}

std::vector<double> log_delta_schedule(double first, double last, int steps) {
    std::vector<double> s(static_cast<std::size_t>(steps));
    const double a = std::log10(first), b = std::log10(last);
    for (int i = 0; i < steps; ++i) s[i] = steps == 1 ? first : std::pow(10.0, a + (b - a) * i / (steps - 1));
    if (steps > 1) {
        s.front() = first;
        s.back() = last;
    }
    return s;
}

std::vector<Violation> ContinuationParams::violations() const {
    std::vector<Violation> v;
    if (!(M > 0.0)) v.push_back({"M", "> 0 required"});
    if (!(M_min > 0.0)) v.push_back({"M_min", "> 0 required"});
    if (lambda_schedule.empty()) {
        v.push_back({"lambda_steps", "non-empty schedule required"});
    } else {
        if (lambda_schedule.front() != 0.0) v.push_back({"lambda_schedule", "must start at 0"});
        if (lambda_schedule.back() != 1.0) v.push_back({"lambda_schedule", "must end at 1"});
        for (std::size_t i = 1; i < lambda_schedule.size(); ++i)
            if (!(lambda_schedule[i] > lambda_schedule[i - 1])) {
                v.push_back({"lambda_schedule", "must be strictly increasing"});
                break;
            }
    }
    if (delta_schedule.empty()) v.push_back({"delta_schedule", "non-empty schedule required"});
    for (double d : delta_schedule)
        if (!(d > 0.0)) {
            v.push_back({"delta_schedule", "entries > 0 required"});
            break;
        }
    for (std::size_t i = 1; i < delta_schedule.size(); ++i)
        if (!(delta_schedule[i] < delta_schedule[i - 1])) {
            v.push_back({"delta_schedule", "must be strictly decreasing"});
            break;
        }
    if (!(C0 > 0.0)) v.push_back({"C0", "> 0 required"});
    if (!(E > 0.0)) v.push_back({"E", "> 0 required"});
    if (!(C_f > 0.0)) v.push_back({"C_f", "> 0 required"});
    if (!(damping > 0.0 && damping <= 1.0)) v.push_back({"damping", "in (0,1] required"});
    if (!(fp_tol > 0.0)) v.push_back({"fp_tol", "> 0 required"});
    if (max_fp < 1) v.push_back({"max_fp", ">= 1 required"});
    if (!(p > 3.0)) v.push_back({"p", "> 3 required"});
    try {
        solver.validate();
    } catch (const ValidationError& e) {
        v.insert(v.end(), e.violations().begin(), e.violations().end());
    }
    return v;
}

void ContinuationParams::validate() const {
    auto v = violations();
    if (!v.empty()) throw ValidationError(std::move(v));
}

double composite_distance(const FieldState& a, const FieldState& b, const MixtureSpec& spec, double p) {
    const GridSpec& g = a.grid;
    const std::size_t n = g.size();
    ScalarField dr(n), dth(n);
    VectorField du(n);
    std::vector<ScalarField> dy(a.w.size(), ScalarField(n));
    for (std::size_t q = 0; q < n; ++q) {
        dr[q] = a.r[q] - b.r[q];
        du.x[q] = a.u.x[q] - b.u.x[q];
        du.y[q] = a.u.y[q] - b.u.y[q];
        dth[q] = std::exp(a.z[q]) - std::exp(b.z[q]);
        for (std::size_t k = 0; k < a.w.size(); ++k) dy[k][q] = std::exp(a.w[k][q]) - std::exp(b.w[k][q]);
    }
    return std::pow(a.M, spec.gamma - 2.0) * norm(g, dr, NormKind::W1p, p) + norm(g, du, NormKind::W1p, p) +
           norm(g, dth, NormKind::W1p, p) + norm(g, dy, NormKind::W1p, p);
}

std::vector<MembershipVerdict> check_membership(const FieldState& s, const MixtureSpec& spec,
                                                const ContinuationParams& params) {
    const GridSpec& g = s.grid;
    const std::size_t n = g.size();
    const double inf = std::numeric_limits<double>::infinity();
    const double p = params.p, E = params.E, Cf = params.C_f;
    std::vector<MembershipVerdict> out;
    auto add = [&](const char* set, const char* what, double value, double bound) {
        out.push_back({set, what, value, bound, std::isfinite(value) && value <= bound});
    };

    const VectorField gux = gradient(g, s.u.x), guy = gradient(g, s.u.y);
    const std::vector<const double*> grad_u{gux.x.data(), gux.y.data(), guy.x.data(), guy.y.data()};
    add("M_u", "||grad u||_2", lp_of_magnitude(g, grad_u, 2.0), E);
    add("M_u", "||grad u||_inf + ||u||_inf", lp_of_magnitude(g, grad_u, inf) + norm(g, s.u, NormKind::Lp, inf), Cf);

    const VectorField gr = gradient(g, s.r);
    const double scale = std::pow(s.M, spec.gamma - 2.0);
    add("M_r", "M^(gamma-2) (||r||_inf + ||grad r||_p)",
        scale * (norm(g, s.r, NormKind::Lp, inf) + lp_of_magnitude(g, {gr.x.data(), gr.y.data()}, p)), Cf);
    // Mean zero up to roundoff relative to the density scale.
    add("M_r", "|mean r| / M", std::abs(mean(g, s.r)) / s.M, 1e-12);

    const ScalarField th = s.theta();
    ScalarField th32(n);
    for (std::size_t q = 0; q < n; ++q) th32[q] = std::pow(th[q], 1.5);
    const VectorField g32 = gradient(g, th32);
    add("M_theta", "||theta||_9^(3/2) + ||grad theta^(3/2)||_2",
        std::pow(norm(g, th, NormKind::Lp, 9.0), 1.5) + lp_of_magnitude(g, {g32.x.data(), g32.y.data()}, 2.0), E);
    add("M_theta", "||theta||_{1,p}", norm(g, th, NormKind::W1p, p), Cf);

    const std::vector<ScalarField> Y = s.Y();
    add("M_Y", "||Y||_{1,2}", norm(g, Y, NormKind::W1p, 2.0), E);
    std::vector<VectorField> gy;
    std::vector<const double*> comps;
    for (const auto& y : Y) gy.push_back(gradient(g, y));
    for (const auto& d : gy) {
        comps.push_back(d.x.data());
        comps.push_back(d.y.data());
    }
    add("M_Y", "||grad Y||_p", lp_of_magnitude(g, comps, p), Cf);
    return out;
}

LedgerParams ledger_params(const ContinuationParams& params, double delta) {
    return {Regularization::from_delta(delta), params.p, params.C0, params.E};
}

Homotopy::Homotopy(const GridSpec& g, const MixtureSpec& spec, const ProblemData& data,
                   const ContinuationParams& params)
    : grid_(g), spec_(spec), data_(data), params_(params), flow_(g, spec, params.solver),
      species_(g, spec, params.solver), thermal_(g, spec, params.solver) {}

FieldState Homotopy::apply(const FieldState& bar, double lambda, const Regularization& reg, SubsolveSummary* summary,
                           double* g_val) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("apply: lambda outside [0,1]");
    const std::size_t n = grid_.size();
    const ScalarField theta_bar = bar.theta();
    const double g = cap_function(norm(grid_, theta_bar, NormKind::W1p, params_.p), params_.C0);
    ScalarField theta_eff(n);
    for (std::size_t q = 0; q < n; ++q) theta_eff[q] = lambda * theta_bar[q] / g;

    // At lambda = 0 the map ignores the barred state; solve from canonical
    // starts with fresh factorizations so the output does not depend on it.
    const bool anchor = lambda == 0.0;
    if (anchor) {
        flow_.reset();
        species_.reset();
        thermal_.reset();
    }
    const FieldState start = FieldState::initial(grid_, bar.M, spec_.n, 1.0);
    const FieldState& warm = anchor ? start : bar;

    FieldState out;
    out.grid = grid_;
    out.M = bar.M;
    try {
        FlowInputs fi{bar.M, lambda, &bar.u, &theta_eff, &data_.force, nullptr, nullptr};
        FlowResult fr = flow_.solve(fi, &warm.r, &warm.u);
        out.r = std::move(fr.r);
        out.u = std::move(fr.u);

        SpeciesInputs si{bar.M, lambda, reg, g, &out.r, &bar.u, &theta_bar, &bar.w, nullptr};
        SpeciesResult sr = species_.solve(si, &warm.w);
        out.w = std::move(sr.w);

        ThermalInputs ti{bar.M, lambda, reg, g, &out.r, &out.u, &bar.z, &bar.w, &out.w, &data_.Theta, nullptr, nullptr};
        ScalarField z0 = warm.z;
        if (anchor) {
            // log of the mean boundary temperature.
            const double len = 2.0 * (grid_.Lx + grid_.Ly);
            z0.assign(n, std::log(integrate_boundary(grid_, data_.Theta) / len));
        }
        ThermalResult tr = thermal_.solve(ti, &z0);
        out.z = std::move(tr.z);

        if (summary) {
            summary->flow_residual = fr.report.final_residual;
            summary->species_residual = sr.report.final_residual;
            summary->thermal_residual = tr.report.final_residual;
            summary->newton_iterations = fr.report.iterations + sr.report.iterations + tr.report.iterations;
        }
    } catch (const SolverError& e) {
        std::ostringstream os;
        os << e.what() << " [lambda=" << lambda << ", delta=" << reg.delta << "]";
        throw SolverError(e.kind(), os.str());
    }
    if (g_val) *g_val = g;
    return out;
}

Homotopy::SolveAt Homotopy::solve_at(double lambda, double delta, const FieldState& warm) {
    const Regularization reg = Regularization::from_delta(delta);
    // F_0 is constant, so one undamped step lands on the fixed point.
    const double theta = lambda == 0.0 ? 1.0 : params_.damping;
    SolveAt res;
    StepRecord& rec = res.record;
    rec.lambda = lambda;
    rec.delta = delta;
    rec.eps = reg.eps;

    FieldState x = warm;
    for (int it = 1; it <= params_.max_fp; ++it) {
        SubsolveSummary sum;
        double g = 1.0;
        FieldState fx = apply(x, lambda, reg, &sum, &g);
        const double d = composite_distance(fx, x, spec_, params_.p);
        rec.iterations = it;
        rec.update_norm = d;
        rec.update_history.push_back(d);
        rec.g_val = g;
        rec.subsolves = sum;
        if (!std::isfinite(d)) {
            std::ostringstream os;
            os << "non-finite fixed-point update [lambda=" << lambda << ", delta=" << delta << "]";
            throw SolverError(SolverFailure::NonConvergence, os.str());
        }
        if (d <= params_.fp_tol) {
            res.state = std::move(fx);
            rec.membership = check_membership(res.state, spec_, params_);
            rec.diagnostics = diagnose(PhysicalState::from(res.state), spec_, data_, ledger_params(params_, delta));
            return res;
        }
        if (theta == 1.0) {
            x = std::move(fx);
            continue;
        }
        for (std::size_t q = 0; q < grid_.size(); ++q) {
            x.r[q] += theta * (fx.r[q] - x.r[q]);
            x.u.x[q] += theta * (fx.u.x[q] - x.u.x[q]);
            x.u.y[q] += theta * (fx.u.y[q] - x.u.y[q]);
            x.z[q] += theta * (fx.z[q] - x.z[q]);
            for (std::size_t k = 0; k < x.w.size(); ++k) x.w[k][q] += theta * (fx.w[k][q] - x.w[k][q]);
        }
    }
    std::ostringstream os;
    os << "fixed point not reached in " << params_.max_fp << " iterations (update " << rec.update_norm
       << ") [lambda=" << lambda << ", delta=" << delta << "]";
    throw SolverError(SolverFailure::MaxIterations, os.str());
}

ConstructionResult run_construction(const GridSpec& g, const MixtureSpec& spec, const ProblemData& data,
                                    const ContinuationParams& params, const FieldState* warm) {
    params.validate();
    Homotopy h(g, spec, data, params);
    ConstructionResult out;
    out.state = warm ? *warm : FieldState::initial(g, params.M, spec.n, 1.0);
    out.state.M = params.M;
    for (double delta : params.delta_schedule) {
        for (double lambda : params.lambda_schedule) {
            try {
                Homotopy::SolveAt s = h.solve_at(lambda, delta, out.state);
                out.state = std::move(s.state);
                out.report.steps.push_back(std::move(s.record));
            } catch (const SolverError& e) {
                out.report.failure = FailureInfo{e.kind(), e.what(), lambda, delta};
                return out;
            }
        }
        out.report.defect_trace.emplace_back(delta, out.report.steps.back().diagnostics.defect.l2);
    }
    return out;
}

}  // namespace mixsteady
