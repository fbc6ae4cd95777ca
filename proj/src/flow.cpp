#include "mixsteady/flow.hpp"

#include <cmath>
#include <string>

#include "mixsteady/kernels.hpp"

namespace mixsteady {

namespace {

class FlowProblem {
public:
    FlowProblem(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg, const FlowInputs& in)
        : g_(g), spec_(spec), cfg_(cfg), in_(in) {
        const std::size_t n = g.size();
        theta_eff_ = in.theta_eff ? *in.theta_eff : ScalarField(n, 0.0);
        ubar_ = in.ubar ? *in.ubar : VectorField(n);
        force_ = in.force ? *in.force : VectorField(n);
        smass_ = in.source_mass ? *in.source_mass : ScalarField(n, 0.0);
        smom_ = in.source_momentum ? *in.source_momentum : VectorField(n);
        const double hx = g.hx(), hy = g.hy();
        tau_ = 1.0 / (2.0 / (hx * hx) + 2.0 / (hy * hy));
        row_scale_ = in.M / tau_;
        area_ = g.Lx * g.Ly;
    }

    const GridSpec& grid() const { return g_; }
    int components() const { return 3; }
    int radius() const { return 2; }
    int globals() const { return 1; }

    void check(const double* x) const {
        const std::size_t n = g_.size();
        const double M = in_.M;
        for (std::size_t p = 0; p < n; ++p) {
            const double rho = M + x[3 * p];
            if (!std::isfinite(rho) || !std::isfinite(x[3 * p + 1]) || !std::isfinite(x[3 * p + 2]))
                throw SolverError(SolverFailure::NonConvergence, "non-finite flow iterate at node " + std::to_string(p));
            if (!(rho > 0.5 * M && rho < 1.5 * M))
                throw SolverError(SolverFailure::DensityExit,
                                  "density " + std::to_string(rho) + " left (M/2, 3M/2) at node " + std::to_string(p));
        }
    }

    void global_rows(const double*, std::vector<Triplet>& out) const {
        const int row = static_cast<int>(3 * g_.size());
        for (int j = 0; j <= g_.ny; ++j)
            for (int i = 0; i <= g_.nx; ++i)
                out.emplace_back(row, static_cast<int>(3 * g_.index(i, j)), g_.weight(i, j) / area_);
    }

    template <class T>
    void residual(const T* x, T* R) const;

    template <class T>
    void rows(const T* x, T* R, bool with_sources) const;

private:
    const GridSpec& g_;
    const MixtureSpec& spec_;
    const SubsolverConfig& cfg_;
    const FlowInputs& in_;
    ScalarField theta_eff_, smass_;
    VectorField ubar_, force_, smom_;
    double tau_ = 0.0, row_scale_ = 1.0, area_ = 1.0;
};

template <class T>
void FlowProblem::residual(const T* x, T* R) const {
    rows(x, R, true);
}

template <class T>
void FlowProblem::rows(const T* x, T* R, bool with_sources) const {
    using std::expm1;
    using std::log1p;
    const GridSpec& g = g_;
    const int nx = g.nx, ny = g.ny, px = g.px();
    const std::size_t n = g.size();
    const double hx = g.hx(), hy = g.hy();
    const double M = in_.M, lam = in_.lambda, gam = spec_.gamma, fr = spec_.f_fric;
    const double Mg = std::pow(M, gam);

    std::vector<T> rho(n), ux(n), uy(n), pi(n);
    for (std::size_t p = 0; p < n; ++p) {
        rho[p] = M + x[3 * p];
        ux[p] = x[3 * p + 1];
        uy[p] = x[3 * p + 2];
        // rho^gamma - M^gamma: only gradients of pi enter, and dropping the
        // constant keeps the rows free of M^gamma-sized rounding.
        pi[p] = Mg * expm1(gam * log1p(x[3 * p] / M)) + rho[p] * theta_eff_[p];
    }
    const T c = x[3 * n];

    std::vector<T> gpx(n), gpy(n), dxux(n), dyux(n), dxuy(n), dyuy(n);
    kernels::gradient(g, pi.data(), gpx.data(), gpy.data());
    kernels::gradient(g, ux.data(), dxux.data(), dyux.data());
    kernels::gradient(g, uy.data(), dxuy.data(), dyuy.data());

    const std::size_t ne = static_cast<std::size_t>(nx) * (ny + 1);
    const std::size_t nn = static_cast<std::size_t>(px) * ny;
    std::vector<T> me(ne), sxe(ne), sye(ne), mn(nn), sxn(nn), syn(nn);
    const double tau = tau_;
#pragma omp parallel for schedule(static)
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const std::size_t p = g.index(i, j), e = p + 1, f = static_cast<std::size_t>(j) * nx + i;
            const T rf = 0.5 * (rho[p] + rho[e]);
            // Next to a wall the one-sided nodal gradient would cancel the
            // stabilization exactly and decouple the wall density.
            const T dpf = (pi[e] - pi[p]) / hx;
            const T gp = i == 0 ? dpf : gpx[p], ge = i + 1 == nx ? dpf : gpx[e];
            me[f] = 0.5 * (rho[p] * ux[p] + rho[e] * ux[e]) - tau * (dpf - 0.5 * (gp + ge));
            sxe[f] = 2.0 * rf * (ux[e] - ux[p]) / hx;
            sye[f] = rf * ((uy[e] - uy[p]) / hx + 0.5 * (dyux[p] + dyux[e]));
        }
        if (j < ny) {
            for (int i = 0; i <= nx; ++i) {
                const std::size_t p = g.index(i, j), q = p + px, f = static_cast<std::size_t>(j) * px + i;
                const T rf = 0.5 * (rho[p] + rho[q]);
                const T dpf = (pi[q] - pi[p]) / hy;
                const T gp = j == 0 ? dpf : gpy[p], gq = j + 1 == ny ? dpf : gpy[q];
                mn[f] = 0.5 * (rho[p] * uy[p] + rho[q] * uy[q]) - tau * (dpf - 0.5 * (gp + gq));
                sxn[f] = rf * ((ux[q] - ux[p]) / hy + 0.5 * (dxuy[p] + dxuy[q]));
                syn[f] = 2.0 * rf * (uy[q] - uy[p]) / hy;
            }
        }
    }

    std::vector<T> divm(n), divsx(n), divsy(n);
    kernels::face_divergence(g, me.data(), mn.data(), divm.data());
    kernels::face_divergence(g, sxe.data(), sxn.data(), divsx.data());
    kernels::face_divergence(g, sye.data(), syn.data(), divsy.data());

    // Wall half-cells: the face-average error of the mass flux is h^2 m''/8 on
    // every interior face; giving the wall face the same error keeps the row
    // second order.
    {
        auto mfx = [&](std::size_t q) { return rho[q] * ux[q]; };
        auto mfy = [&](std::size_t q) { return rho[q] * uy[q]; };
        for (int j = 0; j <= ny; ++j) {
            const std::size_t a = g.index(0, j), b = g.index(nx, j);
            divm[a] -= (mfx(a) - 2.0 * mfx(a + 1) + mfx(a + 2)) / 8.0 / g.wx(0);
            divm[b] += (mfx(b) - 2.0 * mfx(b - 1) + mfx(b - 2)) / 8.0 / g.wx(nx);
        }
        const std::size_t s = static_cast<std::size_t>(px);
        for (int i = 0; i <= nx; ++i) {
            const std::size_t a = g.index(i, 0), b = g.index(i, ny);
            divm[a] -= (mfy(a) - 2.0 * mfy(a + s) + mfy(a + 2 * s)) / 8.0 / g.wy(0);
            divm[b] += (mfy(b) - 2.0 * mfy(b - s) + mfy(b - 2 * s)) / 8.0 / g.wy(ny);
        }
    }

    const bool centered = cfg_.convection == ConvectionScheme::Centered;
    const double ks = row_scale_;
#pragma omp parallel for schedule(static)
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const std::size_t p = g.index(i, j);
            R[3 * p] = divm[p] + c;

            T cx = T(0.0), cy = T(0.0);
            if (lam != 0.0) {
                const double bx = ubar_.x[p], by = ubar_.y[p];
                if (centered) {
                    cx = bx * dxux[p] + by * dyux[p];
                    cy = bx * dxuy[p] + by * dyuy[p];
                } else {
                    auto upwind = [&](const std::vector<T>& f, double vel, int ii, int jj, bool di, double h) {
                        const std::size_t q = g.index(ii, jj);
                        // Prefer the upstream side; fall back to the only neighbour on the boundary.
                        const bool back_ok = di ? ii > 0 : jj > 0;
                        const bool fwd_ok = di ? ii < nx : jj < ny;
                        const std::size_t step = di ? 1 : static_cast<std::size_t>(px);
                        if ((vel > 0.0 && back_ok) || !fwd_ok) return T(vel * ((f[q] - f[q - step]) / h));
                        return T(vel * ((f[q + step] - f[q]) / h));
                    };
                    cx = upwind(ux, bx, i, j, true, hx) + upwind(ux, by, i, j, false, hy);
                    cy = upwind(uy, bx, i, j, true, hx) + upwind(uy, by, i, j, false, hy);
                }
                cx = lam * rho[p] * cx;
                cy = lam * rho[p] * cy;
            }

            T fx = -divsx[p], fy = -divsy[p];
            if (j == 0 || j == ny) fx += fr * ux[p] / g.wy(j);
            if (i == 0 || i == nx) fy += fr * uy[p] / g.wx(i);
            T mx = fx + gpx[p] + cx - rho[p] * force_.x[p];
            T my = fy + gpy[p] + cy - rho[p] * force_.y[p];
            if (with_sources) {
                R[3 * p] -= smass_[p];
                mx -= smom_.x[p];
                my -= smom_.y[p];
            }
            R[3 * p + 1] = (i == 0 || i == nx) ? T(ks * ux[p]) : mx;
            R[3 * p + 2] = (j == 0 || j == ny) ? T(ks * uy[p]) : my;
        }
    }

    T m = T(0.0);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) m += g.weight(i, j) * x[3 * g.index(i, j)];
    R[3 * n] = m / area_;
}

std::vector<double> pack(const ScalarField& r, const VectorField& u, double c) {
    const std::size_t n = r.size();
    std::vector<double> x(3 * n + 1);
    for (std::size_t p = 0; p < n; ++p) {
        x[3 * p] = r[p];
        x[3 * p + 1] = u.x[p];
        x[3 * p + 2] = u.y[p];
    }
    x[3 * n] = c;
    return x;
}

}  // namespace

FlowSolver::FlowSolver(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg)
    : grid_(g), spec_(spec), cfg_(cfg), newton_(cfg.newton) {
    newton_.options().reuse_factorization = cfg.reuse_factorization;
}

FlowResult FlowSolver::solve(const FlowInputs& in, const ScalarField* r0, const VectorField* u0) {
    const std::size_t n = grid_.size();
    FlowProblem prob(grid_, spec_, cfg_, in);
    std::vector<double> x = pack(r0 ? *r0 : ScalarField(n, 0.0), u0 ? *u0 : VectorField(n), 0.0);
    // Walls carry u.n = 0 strongly; start from a compatible iterate.
    for (int j = 0; j <= grid_.ny; ++j) {
        x[3 * grid_.index(0, j) + 1] = 0.0;
        x[3 * grid_.index(grid_.nx, j) + 1] = 0.0;
    }
    for (int i = 0; i <= grid_.nx; ++i) {
        x[3 * grid_.index(i, 0) + 2] = 0.0;
        x[3 * grid_.index(i, grid_.ny) + 2] = 0.0;
    }

    FlowResult res;
    res.report = newton_.solve(prob, x);
    res.r.resize(n);
    res.u = VectorField(n);
    for (std::size_t p = 0; p < n; ++p) {
        res.r[p] = x[3 * p];
        res.u.x[p] = x[3 * p + 1];
        res.u.y[p] = x[3 * p + 2];
    }
    res.multiplier = x[3 * n];
    project_mean_zero(grid_, res.r);
    prob.check(pack(res.r, res.u, 0.0).data());
    return res;
}

FlowResult solve_flow(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg, const FlowInputs& in) {
    FlowSolver s(g, spec, cfg);
    return s.solve(in);
}

FlowResidual flow_residual(const GridSpec& g, const MixtureSpec& spec, const SubsolverConfig& cfg,
                           const FlowInputs& in, const ScalarField& r, const VectorField& u, double c) {
    FlowProblem prob(g, spec, cfg, in);
    const std::vector<double> x = pack(r, u, c);
    std::vector<double> R(x.size());
    prob.rows(x.data(), R.data(), true);
    const std::size_t n = g.size();
    FlowResidual out{ScalarField(n), VectorField(n)};
    for (std::size_t p = 0; p < n; ++p) {
        out.mass[p] = R[3 * p];
        out.momentum.x[p] = R[3 * p + 1];
        out.momentum.y[p] = R[3 * p + 2];
    }
    return out;
}

}  // namespace mixsteady
