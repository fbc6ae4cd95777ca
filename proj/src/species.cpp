#include "mixsteady/species.hpp"

#include <cmath>
#include <string>

#include "mixsteady/kernels.hpp"
#include "mixsteady/kirchhoff.hpp"

namespace mixsteady {

namespace {

constexpr double kExpGuard = 700.0;

// Terms that only depend on barred data.
struct SpeciesData {
    std::size_t n = 0;
    int ns = 0;
    ScalarField rho, dlam, theta_bar;
    std::vector<ScalarField> convection;   // lam rho ubar.grad(Ybar_k) / g
    std::vector<ScalarField> barred_rate;  // lam rho omega_k(Ybar, theta_bar), barred coupling only
    std::vector<ScalarField> source;

    SpeciesData(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg, const SpeciesInputs& in) {
        n = g.size();
        ns = spec.n;
        rho.assign(n, in.M);
        dlam.assign(n, spec.D0 * in.M);
        if (in.r)
            for (std::size_t p = 0; p < n; ++p) {
                rho[p] = in.M + (*in.r)[p];
                dlam[p] = spec.D0 * (in.M + in.lambda * (*in.r)[p]);
            }
        theta_bar = in.theta_bar ? *in.theta_bar : ScalarField(n, 1.0);
        convection.assign(ns, ScalarField(n, 0.0));
        source.assign(ns, ScalarField(n, 0.0));
        if (in.source) source = *in.source;
        if (in.lambda != 0.0 && in.ubar && in.w_bar) {
            ScalarField ybar(n), gx(n), gy(n);
            for (int k = 0; k < ns; ++k) {
                for (std::size_t p = 0; p < n; ++p) ybar[p] = std::exp((*in.w_bar)[k][p]);
                kernels::gradient(g, ybar.data(), gx.data(), gy.data());
                for (std::size_t p = 0; p < n; ++p)
                    convection[k][p] =
                        in.lambda * rho[p] * (in.ubar->x[p] * gx[p] + in.ubar->y[p] * gy[p]) / in.g_val;
            }
        }
        if (cfg.coupling == ReactionCoupling::Barred && in.lambda != 0.0) {
            barred_rate.assign(ns, ScalarField(n, 0.0));
            std::vector<double> yb(ns), om(ns);
            for (std::size_t p = 0; p < n; ++p) {
                for (int k = 0; k < ns; ++k) yb[k] = in.w_bar ? std::exp((*in.w_bar)[k][p]) : 1.0 / ns;
                production_rates<double>(theta_bar[p], yb.data(), om.data(), spec);
                for (int k = 0; k < ns; ++k) barred_rate[k][p] = in.lambda * rho[p] * om[k];
            }
        }
    }
};

class SpeciesProblem {
public:
    SpeciesProblem(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg, const SpeciesInputs& in)
        : g_(g), spec_(spec), in_(in), data_(g, spec, cfg, in),
          implicit_(cfg.coupling == ReactionCoupling::Implicit && in.lambda != 0.0), unit_(g.size(), 1.0) {}

    const GridSpec& grid() const { return g_; }
    int components() const { return spec_.n; }
    int radius() const { return 1; }
    int globals() const { return 0; }
    void global_rows(const double*, std::vector<Triplet>&) const {}

    void check(const double* x) const {
        const std::size_t N = g_.size() * static_cast<std::size_t>(spec_.n);
        for (std::size_t q = 0; q < N; ++q) {
            if (!std::isfinite(x[q]))
                throw SolverError(SolverFailure::NonConvergence, "non-finite species iterate");
            if (std::abs(x[q]) > kExpGuard)
                throw SolverError(SolverFailure::OverflowGuard,
                                  "|w| exceeded 700 at node " + std::to_string(q / spec_.n));
        }
    }

    template <class T>
    void residual(const T* x, T* R) const {
        using std::exp;
        const std::size_t n = g_.size();
        const int ns = spec_.n;
        const double eps = in_.reg.eps, delta = in_.reg.delta, lam = in_.lambda;
        std::vector<T> w(n), y(n), d1(n), d2(n);
        std::vector<std::vector<T>> Y(ns);
        for (int k = 0; k < ns; ++k) {
            for (std::size_t p = 0; p < n; ++p) {
                w[p] = x[p * ns + k];
                y[p] = exp(w[p]);
            }
            kernels::div_c_grad(g_, data_.dlam.data(), y.data(), d1.data());
            kernels::div_c_grad(g_, unit_.data(), w.data(), d2.data());
            for (std::size_t p = 0; p < n; ++p)
                R[p * ns + k] = eps * w[p] - (d1[p] + eps * d2[p]) + delta * y[p] - delta / ns +
                                data_.convection[k][p] - data_.source[k][p];
            Y[k] = y;
        }
        if (lam == 0.0) return;
        if (implicit_) {
#pragma omp parallel
            {
                std::vector<T> yk(ns), om(ns);
#pragma omp for schedule(static)
                for (std::size_t p = 0; p < n; ++p) {
                    for (int k = 0; k < ns; ++k) yk[k] = Y[k][p];
                    production_rates<T>(T(data_.theta_bar[p]), yk.data(), om.data(), spec_);
                    for (int k = 0; k < ns; ++k) R[p * ns + k] -= lam * data_.rho[p] * om[k];
                }
            }
        } else {
            for (std::size_t p = 0; p < n; ++p)
                for (int k = 0; k < ns; ++k) R[p * ns + k] -= data_.barred_rate[k][p];
        }
    }

private:
    const GridSpec& g_;
    const MixtureSpec& spec_;
    const SpeciesInputs& in_;
    SpeciesData data_;
    bool implicit_;
    ScalarField unit_;
};

// One species on the Kirchhoff variable W = H(w), lambda = 0:
//   -div grad W + eps H^{-1}(W) + delta e^{H^{-1}(W)} - delta/n = source.
class KirchhoffProblem {
public:
    KirchhoffProblem(const GridSpec& g, double D0M, const Regularization& reg, int ns, const ScalarField& source)
        : g_(g), D0M_(D0M), reg_(reg), ns_(ns), source_(source), unit_(g.size(), 1.0) {}

    const GridSpec& grid() const { return g_; }
    int components() const { return 1; }
    int radius() const { return 1; }
    int globals() const { return 0; }
    void global_rows(const double*, std::vector<Triplet>&) const {}

    void check(const double* x) const {
        for (std::size_t p = 0; p < g_.size(); ++p) {
            if (!std::isfinite(x[p])) throw SolverError(SolverFailure::NonConvergence, "non-finite Kirchhoff iterate");
            const double w = kirchhoff_inverse(x[p], D0M_, reg_.eps);
            if (std::abs(w) > kExpGuard)
                throw SolverError(SolverFailure::OverflowGuard, "|w| exceeded 700 at node " + std::to_string(p));
        }
    }

    template <class T>
    void residual(const T* x, T* R) const {
        using std::exp;
        const std::size_t n = g_.size();
        std::vector<T> lap(n);
        kernels::div_c_grad(g_, unit_.data(), x, lap.data());
        for (std::size_t p = 0; p < n; ++p) {
            const T w = kirchhoff_inverse(x[p], D0M_, reg_.eps);
            R[p] = reg_.eps * w - lap[p] + reg_.delta * exp(w) - reg_.delta / ns_ - source_[p];
        }
    }

private:
    const GridSpec& g_;
    double D0M_;
    Regularization reg_;
    int ns_;
    const ScalarField& source_;
    ScalarField unit_;
};

}  // namespace

SpeciesSolver::SpeciesSolver(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg)
    : grid_(g), spec_(spec), cfg_(cfg), direct_(cfg.newton), kirchhoff_(cfg.newton) {
    direct_.options().reuse_factorization = cfg.reuse_factorization;
    kirchhoff_.options().reuse_factorization = false;
}

SpeciesResult SpeciesSolver::solve(const SpeciesInputs& in, const std::vector<ScalarField>* w0) {
    if (in.lambda == 0.0) return solve_kirchhoff(in, w0);
    return solve_direct(in, w0);
}

SpeciesResult SpeciesSolver::solve_direct(const SpeciesInputs& in, const std::vector<ScalarField>* w0) {
    const std::size_t n = grid_.size();
    const int ns = spec_.n;
    SpeciesProblem prob(grid_, spec_, cfg_, in);
    std::vector<double> x(n * ns);
    for (std::size_t p = 0; p < n; ++p)
        for (int k = 0; k < ns; ++k) x[p * ns + k] = w0 ? (*w0)[k][p] : std::log(1.0 / ns);
    SpeciesResult res;
    res.report = direct_.solve(prob, x);
    res.path = "newton";
    res.w.assign(ns, ScalarField(n));
    for (std::size_t p = 0; p < n; ++p)
        for (int k = 0; k < ns; ++k) res.w[k][p] = x[p * ns + k];
    return res;
}

SpeciesResult SpeciesSolver::solve_kirchhoff(const SpeciesInputs& in, const std::vector<ScalarField>* w0) {
    if (in.lambda != 0.0) throw DomainError("solve_kirchhoff: only valid at lambda = 0");
    const std::size_t n = grid_.size();
    const int ns = spec_.n;
    const double D0M = spec_.D0 * in.M;
    SpeciesResult res;
    res.path = "kirchhoff";
    res.w.assign(ns, ScalarField(n));
    const ScalarField zero(n, 0.0);
    for (int k = 0; k < ns; ++k) {
        const ScalarField& src = in.source ? (*in.source)[k] : zero;
        KirchhoffProblem prob(grid_, D0M, in.reg, ns, src);
        std::vector<double> W(n);
        for (std::size_t p = 0; p < n; ++p)
            W[p] = kirchhoff(w0 ? (*w0)[k][p] : std::log(1.0 / ns), D0M, in.reg.eps);
        const NewtonReport rep = kirchhoff_.solve(prob, W);
        for (std::size_t p = 0; p < n; ++p) res.w[k][p] = kirchhoff_inverse(W[p], D0M, in.reg.eps);
        res.report.iterations += rep.iterations;
        res.report.jacobians += rep.jacobians;
        res.report.initial_residual = std::max(res.report.initial_residual, rep.initial_residual);
        res.report.final_residual = std::max(res.report.final_residual, rep.final_residual);
        res.report.history.insert(res.report.history.end(), rep.history.begin(), rep.history.end());
    }
    res.report.converged = true;
    return res;
}

SpeciesResult solve_species(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg,
                            const SpeciesInputs& in) {
    SpeciesSolver s(g, spec, cfg);
    return s.solve(in);
}

std::vector<ScalarField> species_residual(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg,
                                          const SpeciesInputs& in, const std::vector<ScalarField>& w) {
    const std::size_t n = g.size();
    const int ns = spec.n;
    SpeciesProblem prob(g, spec, cfg, in);
    std::vector<double> x(n * ns), R(n * ns);
    for (std::size_t p = 0; p < n; ++p)
        for (int k = 0; k < ns; ++k) x[p * ns + k] = w[k][p];
    prob.residual(x.data(), R.data());
    std::vector<ScalarField> out(ns, ScalarField(n));
    for (std::size_t p = 0; p < n; ++p)
        for (int k = 0; k < ns; ++k) out[k][p] = R[p * ns + k];
    return out;
}

}  // namespace mixsteady
