#include "mixsteady/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace mixsteady {

namespace {

// Nodewise function of boundary data, evaluated side by side.
BoundaryFlux boundary_map(const GridSpec& g, const std::function<double(std::size_t, double)>& f,
                          const BoundaryFlux& Theta) {
    BoundaryFlux b = BoundaryFlux::zeros(g);
    for (int j = 0; j <= g.ny; ++j) {
        b[Side::Left][j] = f(g.index(0, j), Theta[Side::Left][j]);
        b[Side::Right][j] = f(g.index(g.nx, j), Theta[Side::Right][j]);
    }
    for (int i = 0; i <= g.nx; ++i) {
        b[Side::Bottom][i] = f(g.index(i, 0), Theta[Side::Bottom][i]);
        b[Side::Top][i] = f(g.index(i, g.ny), Theta[Side::Top][i]);
    }
    return b;
}

double boundary_L(const MixtureSpec& spec, double rho, double theta) {
    return spec.L0 * rho * (1.0 + theta * theta * theta);
}

ScalarField density(const PhysicalState& s) {
    ScalarField rho(s.grid.size());
    for (std::size_t p = 0; p < rho.size(); ++p) rho[p] = s.M + s.r[p];
    return rho;
}

ScalarField species_sum(const PhysicalState& s) {
    ScalarField sy(s.grid.size(), 0.0);
    for (const auto& y : s.Y)
        for (std::size_t p = 0; p < sy.size(); ++p) sy[p] += y[p];
    return sy;
}

void require_positive(const PhysicalState& s) {
    for (std::size_t p = 0; p < s.grid.size(); ++p) {
        if (!(s.theta[p] > 0.0)) throw DomainError("nonpositive theta at node " + std::to_string(p));
        if (!(s.M + s.r[p] > 0.0)) throw DomainError("nonpositive density at node " + std::to_string(p));
        for (const auto& y : s.Y)
            if (!(y[p] > 0.0)) throw DomainError("nonpositive Y at node " + std::to_string(p));
    }
}

}  // namespace

ProblemData ProblemData::trivial(const GridSpec& g, double Theta0) {
    return {VectorField(g.size()), BoundaryFlux::constant(g, Theta0)};
}

EntropyProduction entropy_production(const PhysicalState& s, const MixtureSpec& spec) {
    require_positive(s);
    const GridSpec& g = s.grid;
    const std::size_t n = g.size();
    const int ns = spec.n;
    const VectorField gux = gradient(g, s.u.x), guy = gradient(g, s.u.y), gth = gradient(g, s.theta);
    std::vector<VectorField> gy;
    for (const auto& y : s.Y) gy.push_back(gradient(g, y));

    EntropyProduction e;
    e.viscous.assign(n, 0.0);
    e.thermal.assign(n, 0.0);
    e.diffusive.assign(n, 0.0);
    e.reactive.assign(n, 0.0);
    e.total.assign(n, 0.0);
    std::vector<double> yk(ns), om(ns);
    for (std::size_t p = 0; p < n; ++p) {
        const double rho = s.M + s.r[p], th = s.theta[p];
        const double dxy = 0.5 * (gux.y[p] + guy.x[p]);
        const double dd = gux.x[p] * gux.x[p] + guy.y[p] * guy.y[p] + 2.0 * dxy * dxy;
        e.viscous[p] = 2.0 * rho * dd / th;
        const double kappa = spec.kappa0 * rho * (1.0 + th * th * th);
        e.thermal[p] = kappa * (gth.x[p] * gth.x[p] + gth.y[p] * gth.y[p]) / (th * th);
        double diff = 0.0;
        for (int k = 0; k < ns; ++k) {
            const VectorField& d = gy[static_cast<std::size_t>(k)];
            diff += spec.D0 * rho * (d.x[p] * d.x[p] + d.y[p] * d.y[p]) / s.Y[k][p];
            yk[k] = s.Y[k][p];
        }
        e.diffusive[p] = diff;
        production_rates<double>(th, yk.data(), om.data(), spec);
        double react = 0.0;
        for (int k = 0; k < ns; ++k) {
            const double sk = spec.c_v[k] * std::log(th) - std::log(rho * yk[k]);
            react -= rho * om[k] * (spec.c_p(k) - sk);
        }
        e.reactive[p] = react;
        e.total[p] = e.viscous[p] + e.thermal[p] + e.diffusive[p] + e.reactive[p];
    }
    e.min = *std::min_element(e.total.begin(), e.total.end());
    for (double v : e.total) e.max_abs = std::max(e.max_abs, std::abs(v));
    return e;
}

Balance entropy_balance(const PhysicalState& s, const MixtureSpec& spec, const ProblemData& data,
                        const Regularization& reg) {
    const GridSpec& g = s.grid;
    const std::size_t n = g.size();
    const int ns = spec.n;
    const double eps = reg.eps, delta = reg.delta;
    const EntropyProduction sig = entropy_production(s, spec);
    const ScalarField rho = density(s);

    Balance b;
    const BoundaryFlux wall = boundary_map(
        g,
        [&](std::size_t p, double Th) { return boundary_L(spec, rho[p], s.theta[p]) * (Th - s.theta[p]) / s.theta[p]; },
        data.Theta);
    b.raw = integrate(g, sig.total) + integrate_boundary(g, wall);

    const VectorField gth = gradient(g, s.theta), grho = gradient(g, s.r);
    const ScalarField sy = species_sum(s);
    ScalarField vol(n, 0.0), bnd(n);
    for (std::size_t p = 0; p < n; ++p) {
        const double th = s.theta[p];
        bnd[p] = eps * std::log(th) / th;
        const double kappa = spec.kappa0 * rho[p] * (1.0 + th * th * th);
        const double g2 = gth.x[p] * gth.x[p] + gth.y[p] * gth.y[p];
        vol[p] = -delta * kappa * g2 / (th * th * th) + (sy[p] - 1.0) * (s.u.x[p] * grho.x[p] + s.u.y[p] * grho.y[p]);
    }
    for (int k = 0; k < ns; ++k) {
        const ScalarField& y = s.Y[k];
        ScalarField w(n);
        for (std::size_t p = 0; p < n; ++p) w[p] = std::log(y[p]);
        const VectorField gy = gradient(g, y), gw = gradient(g, w);
        for (std::size_t p = 0; p < n; ++p) {
            const double th = s.theta[p], D = spec.D0 * rho[p];
            const double fx = -D * gy.x[p] - eps * gw.x[p], fy = -D * gy.y[p] - eps * gw.y[p];
            const double ax = gth.x[p] / th + grho.x[p] / rho[p], ay = gth.y[p] / th + grho.y[p] / rho[p];
            const double sk = spec.c_v[k] * std::log(th) - std::log(rho[p] * y[p]);
            vol[p] += fx * ax + fy * ay - eps * (gw.x[p] * gw.x[p] + gw.y[p] * gw.y[p]) +
                      (-eps * w[p] - delta * y[p] + delta / ns) * (spec.c_p(k) - sk);
        }
    }
    b.regularization = integrate_boundary(g, bnd) + integrate(g, vol);
    b.residual = b.raw - b.regularization;
    return b;
}

Balance total_energy_balance(const PhysicalState& s, const MixtureSpec& spec, const ProblemData& data,
                             const Regularization& reg) {
    const GridSpec& g = s.grid;
    const std::size_t n = g.size();
    const ScalarField rho = density(s);
    const BoundaryFlux wall = boundary_map(
        g,
        [&](std::size_t p, double Th) {
            const double u2 = s.u.x[p] * s.u.x[p] + s.u.y[p] * s.u.y[p];
            return boundary_L(spec, rho[p], s.theta[p]) * (s.theta[p] - Th) + spec.f_fric * u2;
        },
        data.Theta);
    ScalarField work(n), ez(n);
    for (std::size_t p = 0; p < n; ++p) {
        work[p] = rho[p] * (data.force.x[p] * s.u.x[p] + data.force.y[p] * s.u.y[p]);
        ez[p] = -reg.eps * std::log(s.theta[p]);
    }
    Balance b;
    b.raw = integrate_boundary(g, wall) - integrate(g, work);
    b.regularization = integrate_boundary(g, ez);
    b.residual = b.raw - b.regularization;
    return b;
}

double xi_norm(const PhysicalState& s, const MixtureSpec& spec, double p) {
    if (!(p > 3.0)) throw DomainError("xi_norm: p > 3 required");
    const GridSpec& g = s.grid;
    return std::pow(s.M, spec.gamma - 2.0) * norm(g, s.r, NormKind::W1p, p) + norm(g, s.u, NormKind::W2p, p) +
           norm(g, s.theta, NormKind::W1p, p) + norm(g, s.Y, NormKind::W1p, p);
}

MassDefect mass_defect(const PhysicalState& s) {
    ScalarField d = species_sum(s);
    for (double& v : d) v -= 1.0;
    return {norm(s.grid, d, NormKind::Lp, 2.0), norm(s.grid, d, NormKind::W1p, 2.0)};
}

std::vector<double> compatibility_residual(const PhysicalState& s, const MixtureSpec& spec) {
    const std::size_t n = s.grid.size();
    const int ns = spec.n;
    std::vector<ScalarField> om(ns, ScalarField(n));
    std::vector<double> yk(ns), o(ns);
    for (std::size_t p = 0; p < n; ++p) {
        for (int k = 0; k < ns; ++k) yk[k] = s.Y[k][p];
        production_rates<double>(s.theta[p], yk.data(), o.data(), spec);
        for (int k = 0; k < ns; ++k) om[k][p] = o[k];
    }
    std::vector<double> out(ns);
    for (int k = 0; k < ns; ++k) out[k] = integrate(s.grid, om[k]);
    return out;
}

std::vector<LedgerEntry> bound_ledger(const PhysicalState& s, const MixtureSpec& spec, const LedgerParams& lp) {
    const GridSpec& g = s.grid;
    const std::size_t n = g.size();
    const double u12 = norm(g, s.u, NormKind::W1p, 2.0);
    const double th9 = norm(g, s.theta, NormKind::Lp, 9.0);
    const double th12 = norm(g, s.theta, NormKind::W1p, 2.0);
    const double y12 = norm(g, s.Y, NormKind::W1p, 2.0);

    ScalarField z(n);
    for (std::size_t p = 0; p < n; ++p) z[p] = std::log(s.theta[p]);
    const double z12 = norm(g, z, NormKind::W1p, 2.0);
    const double d = lp.reg.delta;
    double ylog = 0.0;
    for (const auto& y : s.Y) {
        ScalarField w(n), ywl(n);
        for (std::size_t p = 0; p < n; ++p) {
            w[p] = std::log(y[p]);
            ywl[p] = y[p] * w[p];
        }
        const double w12 = norm(g, w, NormKind::W1p, 2.0);
        ylog += d * d * d * w12 * w12 + d * norm(g, ywl, NormKind::Lp, 1.0);
    }

    std::vector<LedgerEntry> out;
    auto add = [&](std::string id, double lhs, double rhs) { out.push_back({std::move(id), lhs, rhs, lhs <= rhs}); };
    add("low_order", u12 + th9 + th12 + y12, lp.E);
    add("high_order", xi_norm(s, spec, lp.p), lp.C0);
    add("regularized_low_order", u12 + th9 * th9 * th9 + th12 + y12 + z12 * z12 + ylog, lp.E);
    return out;
}

DiagnosticsReport diagnose(const PhysicalState& s, const MixtureSpec& spec, const ProblemData& data,
                           const LedgerParams& lp) {
    DiagnosticsReport r;
    r.sigma = entropy_production(s, spec);
    r.entropy = entropy_balance(s, spec, data, lp.reg);
    r.sigma_regularization = r.entropy.regularization;
    r.energy = total_energy_balance(s, spec, data, lp.reg);
    r.xi = xi_norm(s, spec, lp.p);
    r.xi_over_M = r.xi / s.M;
    r.defect = mass_defect(s);
    r.compat = compatibility_residual(s, spec);
    r.ledger = bound_ledger(s, spec, lp);
    return r;
}

}  // namespace mixsteady
