#include "mixsteady/thermal.hpp"

#include <cmath>
#include <string>

#include "mixsteady/kernels.hpp"

namespace mixsteady {

namespace {

constexpr double kExpGuard = 700.0;

template <class T>
T potential(const T& z, double delta) {
    using std::exp;
    const T e1 = exp(z);
    const T e3 = e1 * e1 * e1;
    return delta * z + delta * e3 / 3.0 + e1 + e3 * e1 / 4.0;
}

template <class T>
T robin(const T& z, double coeff_c, double Theta, double eps, double gb, double L0) {
    using std::exp;
    const T e1 = exp(z);
    return L0 * (1.0 + e1 * e1 * e1) * coeff_c * (e1 - Theta) + eps * z + gb;
}

class ThermalProblem {
public:
    ThermalProblem(const GridSpec& g, const MixtureSpec& spec, const ThermalInputs& in)
        : g_(g), spec_(spec), in_(in), c_(g.size(), in.M), rhs_(thermal_source(g, spec, in).total) {
        if (in.r)
            for (std::size_t p = 0; p < g.size(); ++p) c_[p] = in.M + in.lambda * (*in.r)[p];
        if (in.source)
            for (std::size_t p = 0; p < g.size(); ++p) rhs_[p] += (*in.source)[p];
        theta_ = in.Theta ? *in.Theta : BoundaryFlux::constant(g, 1.0);
        gb_ = in.boundary_source ? *in.boundary_source : BoundaryFlux::zeros(g);
    }

    const GridSpec& grid() const { return g_; }
    int components() const { return 1; }
    int radius() const { return 1; }
    int globals() const { return 0; }
    void global_rows(const double*, std::vector<Triplet>&) const {}

    void check(const double* x) const {
        for (std::size_t p = 0; p < g_.size(); ++p) {
            if (!std::isfinite(x[p])) throw SolverError(SolverFailure::NonConvergence, "non-finite thermal iterate");
            if (std::abs(4.0 * x[p]) > kExpGuard)
                throw SolverError(SolverFailure::OverflowGuard, "|4z| exceeded 700 at node " + std::to_string(p));
        }
    }

    template <class T>
    void boundary(const T* x, std::array<std::vector<T>, 4>& q) const {
        const int nx = g_.nx, ny = g_.ny;
        const double eps = in_.reg.eps, L0 = spec_.L0;
        for (auto& s : q) s.clear();
        for (int j = 0; j <= ny; ++j) {
            const std::size_t a = g_.index(0, j), b = g_.index(nx, j);
            q[0].push_back(robin(x[a], c_[a], theta_[Side::Left][j], eps, gb_[Side::Left][j], L0));
            q[1].push_back(robin(x[b], c_[b], theta_[Side::Right][j], eps, gb_[Side::Right][j], L0));
        }
        for (int i = 0; i <= nx; ++i) {
            const std::size_t a = g_.index(i, 0), b = g_.index(i, ny);
            q[2].push_back(robin(x[a], c_[a], theta_[Side::Bottom][i], eps, gb_[Side::Bottom][i], L0));
            q[3].push_back(robin(x[b], c_[b], theta_[Side::Top][i], eps, gb_[Side::Top][i], L0));
        }
    }

    template <class T>
    void residual(const T* x, T* R) const {
        const std::size_t n = g_.size();
        std::vector<T> phi(n), d(n);
        for (std::size_t p = 0; p < n; ++p) phi[p] = potential(x[p], in_.reg.delta);
        kernels::div_c_grad(g_, c_.data(), phi.data(), d.data());
        for (std::size_t p = 0; p < n; ++p) d[p] *= spec_.kappa0;
        std::array<std::vector<T>, 4> q;
        boundary(x, q);
        kernels::subtract_boundary_outflux(g_, q[0].data(), q[1].data(), q[2].data(), q[3].data(), d.data());
        for (std::size_t p = 0; p < n; ++p) R[p] = -d[p] - rhs_[p];
    }

private:
    const GridSpec& g_;
    const MixtureSpec& spec_;
    const ThermalInputs& in_;
    ScalarField c_;
    ScalarField rhs_;
    BoundaryFlux theta_, gb_;
};

}  // namespace

double thermal_potential(double z, double delta) { return potential(z, delta); }

namespace {

// Nodal gradient of a data field. Source terms are built from data, so the
// boundary rows use third-order one-sided differences.
void data_gradient(const GridSpec& g, const double* f, double* gx, double* gy) {
    kernels::gradient(g, f, gx, gy);
    const int nx = g.nx, ny = g.ny;
    const std::size_t px = static_cast<std::size_t>(g.px());
    const double ihx = 1.0 / (6.0 * g.hx()), ihy = 1.0 / (6.0 * g.hy());
    if (nx >= 3)
        for (int j = 0; j <= ny; ++j) {
            const double* r = f + j * px;
            gx[j * px] = (-11.0 * r[0] + 18.0 * r[1] - 9.0 * r[2] + 2.0 * r[3]) * ihx;
            gx[j * px + nx] = (11.0 * r[nx] - 18.0 * r[nx - 1] + 9.0 * r[nx - 2] - 2.0 * r[nx - 3]) * ihx;
        }
    if (ny >= 3)
        for (int i = 0; i <= nx; ++i) {
            const double* c = f + i;
            const std::size_t t = ny * px;
            gy[i] = (-11.0 * c[0] + 18.0 * c[px] - 9.0 * c[2 * px] + 2.0 * c[3 * px]) * ihy;
            gy[t + i] = (11.0 * c[t] - 18.0 * c[t - px] + 9.0 * c[t - 2 * px] - 2.0 * c[t - 3 * px]) * ihy;
        }
}

}  // namespace

ThermalSource thermal_source(const GridSpec& g, const MixtureSpec& spec, const ThermalInputs& in) {
    const std::size_t n = g.size();
    const double lam = in.lambda;
    ThermalSource s;
    s.viscous.assign(n, 0.0);
    s.compression.assign(n, 0.0);
    s.convection.assign(n, 0.0);
    s.diffusion.assign(n, 0.0);
    s.total.assign(n, 0.0);

    ScalarField rho(n, in.M);
    if (in.r)
        for (std::size_t p = 0; p < n; ++p) rho[p] = in.M + (*in.r)[p];

    ScalarField dxux(n), dyux(n), dxuy(n), dyuy(n);
    if (in.u) {
        data_gradient(g, in.u->x.data(), dxux.data(), dyux.data());
        data_gradient(g, in.u->y.data(), dxuy.data(), dyuy.data());
        for (std::size_t p = 0; p < n; ++p) {
            const double shear = dyux[p] + dxuy[p];
            s.viscous[p] = rho[p] * (2.0 * dxux[p] * dxux[p] + 2.0 * dyuy[p] * dyuy[p] + shear * shear);
        }
    }

    if (lam != 0.0) {
        ScalarField tbar(n, 1.0);
        if (in.z_bar)
            for (std::size_t p = 0; p < n; ++p) tbar[p] = std::exp((*in.z_bar)[p]);
        if (in.u) {
            ScalarField em(n, 0.0), gx(n), gy(n);
            if (in.w_bar)
                for (std::size_t p = 0; p < n; ++p) {
                    double m = 0.0;
                    for (int k = 0; k < spec.n; ++k) m += spec.c_v[k] * std::exp((*in.w_bar)[k][p]);
                    em[p] = tbar[p] * m / in.g_val;
                }
            data_gradient(g, em.data(), gx.data(), gy.data());
            for (std::size_t p = 0; p < n; ++p) {
                s.compression[p] = -lam * rho[p] * tbar[p] / in.g_val * (dxux[p] + dyuy[p]);
                s.convection[p] = -lam * rho[p] * (in.u->x[p] * gx[p] + in.u->y[p] * gy[p]);
            }
        }
        if (in.w) {
            // Face fluxes sum_k thetabar_f c_pk F_k,f with F_k,f the species face flux.
            const int nx = g.nx, ny = g.ny, px = g.px();
            const double hx = g.hx(), hy = g.hy(), eps = in.reg.eps;
            ScalarField dl(n);
            for (std::size_t p = 0; p < n; ++p)
                dl[p] = spec.D0 * (in.M + lam * (in.r ? (*in.r)[p] : 0.0));
            std::vector<ScalarField> Y(spec.n, ScalarField(n));
            for (int k = 0; k < spec.n; ++k)
                for (std::size_t p = 0; p < n; ++p) Y[k][p] = std::exp((*in.w)[k][p]);
            ScalarField fe(static_cast<std::size_t>(nx) * (ny + 1), 0.0), fn(static_cast<std::size_t>(px) * ny, 0.0);
            for (int j = 0; j <= ny; ++j)
                for (int i = 0; i < nx; ++i) {
                    const std::size_t a = g.index(i, j), b = a + 1;
                    double acc = 0.0;
                    for (int k = 0; k < spec.n; ++k) {
                        const double F = -(0.5 * (dl[a] + dl[b]) * (Y[k][b] - Y[k][a]) +
                                           eps * ((*in.w)[k][b] - (*in.w)[k][a])) / hx;
                        acc += spec.c_p(k) * F;
                    }
                    fe[static_cast<std::size_t>(j) * nx + i] = 0.5 * (tbar[a] + tbar[b]) * acc;
                }
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i <= nx; ++i) {
                    const std::size_t a = g.index(i, j), b = a + px;
                    double acc = 0.0;
                    for (int k = 0; k < spec.n; ++k) {
                        const double F = -(0.5 * (dl[a] + dl[b]) * (Y[k][b] - Y[k][a]) +
                                           eps * ((*in.w)[k][b] - (*in.w)[k][a])) / hy;
                        acc += spec.c_p(k) * F;
                    }
                    fn[static_cast<std::size_t>(j) * px + i] = 0.5 * (tbar[a] + tbar[b]) * acc;
                }
            ScalarField div(n);
            kernels::face_divergence(g, fe.data(), fn.data(), div.data());
            for (std::size_t p = 0; p < n; ++p) s.diffusion[p] = -lam * div[p];
        }
    }
    for (std::size_t p = 0; p < n; ++p)
        s.total[p] = s.viscous[p] + s.compression[p] + s.convection[p] + s.diffusion[p];
    return s;
}

ThermalSolver::ThermalSolver(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg)
    : grid_(g), spec_(spec), cfg_(cfg), newton_(cfg.newton) {
    newton_.options().reuse_factorization = cfg.reuse_factorization;
}

ThermalResult ThermalSolver::solve(const ThermalInputs& in, const ScalarField* z0) {
    ThermalProblem prob(grid_, spec_, in);
    // Default start: log of the boundary-mean Theta. The Robin term is not
    // monotone in z below Theta, so starting far under it can send Newton
    // the wrong way.
    std::vector<double> x;
    if (z0) {
        x = *z0;
    } else {
        const BoundaryFlux Th = in.Theta ? *in.Theta : BoundaryFlux::constant(grid_, 1.0);
        const double perimeter = 2.0 * (grid_.Lx + grid_.Ly);
        x.assign(grid_.size(), std::log(integrate_boundary(grid_, Th) / perimeter));
    }
    ThermalResult res;
    res.report = newton_.solve(prob, x);
    res.z = std::move(x);
    return res;
}

ThermalResult solve_thermal(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg,
                            const ThermalInputs& in) {
    ThermalSolver s(g, spec, cfg);
    return s.solve(in);
}

ScalarField thermal_residual(const GridSpec& g, const MixtureSpec& spec, const ThermalInputs& in,
                             const ScalarField& z) {
    ThermalProblem prob(g, spec, in);
    ScalarField R(g.size());
    prob.residual(z.data(), R.data());
    return R;
}

BoundaryFlux robin_flux(const GridSpec& g, const MixtureSpec& spec, const ThermalInputs& in, const ScalarField& z) {
    ThermalProblem prob(g, spec, in);
    std::array<std::vector<double>, 4> q;
    prob.boundary(z.data(), q);
    BoundaryFlux b;
    for (int s = 0; s < 4; ++s) b.side[s] = q[s];
    return b;
}

}  // namespace mixsteady
