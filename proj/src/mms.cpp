#include "mixsteady/mms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mixsteady/flow.hpp"
#include "mixsteady/species.hpp"
#include "mixsteady/thermal.hpp"

namespace mixsteady {

MmsCase parse_mms_case(const std::string& name) {
    if (name == "thermal") return MmsCase::Thermal;
    if (name == "species") return MmsCase::Species;
    if (name == "flow") return MmsCase::Flow;
    if (name == "coupled") return MmsCase::Coupled;
    throw std::invalid_argument("unknown MMS case '" + name + "' (expected thermal, species, flow, coupled)");
}

const char* to_string(MmsCase c) {
    switch (c) {
        case MmsCase::Thermal: return "thermal";
        case MmsCase::Species: return "species";
        case MmsCase::Flow: return "flow";
        case MmsCase::Coupled: return "coupled";
    }
    return "unknown";
}

double fd_dx(const Field2& f, double x, double y, double eta) {
    return (-f(x - 3 * eta, y) + 9 * f(x - 2 * eta, y) - 45 * f(x - eta, y) + 45 * f(x + eta, y) -
            9 * f(x + 2 * eta, y) + f(x + 3 * eta, y)) /
           (60 * eta);
}

double fd_dy(const Field2& f, double x, double y, double eta) {
    return (-f(x, y - 3 * eta) + 9 * f(x, y - 2 * eta) - 45 * f(x, y - eta) + 45 * f(x, y + eta) -
            9 * f(x, y + 2 * eta) + f(x, y + 3 * eta)) /
           (60 * eta);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = std::log(x[k]), b = std::log(y[k]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

using std::numbers::pi;

// Manufactured fields. The velocity satisfies u.n = 0 and the friction slip
// condition: r vanishes up to a constant on the walls, so the wall density is
// a constant rho_w and the tangential profiles cos(k(s - 1/2)) need
// rho_w k tan(k/2) = f_fric. Species satisfy zero normal gradient; the
// temperature is generic and carries a boundary source.
struct Manufactured {
    double M;
    int ns;
    double k = 0.0;
    Field2 r = [](double x, double y) { return 0.5 * (std::sin(pi * x) * std::sin(pi * y) - 4.0 / (pi * pi)); };
    Field2 ux, uy;
    Field2 z = [](double x, double y) { return 0.1 + 0.15 * std::sin(1.3 * x + 0.4) * std::cos(0.9 * y + 0.2); };
    std::vector<Field2> w;

    Manufactured(double M_, int ns_, double f_fric) : M(M_), ns(ns_) {
        const double rho_w = M - 2.0 / (pi * pi);
        if (f_fric > 0.0) {
            double lo = 0.0, hi = pi * (1.0 - 1e-15);
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (rho_w * mid * std::tan(0.5 * mid) < f_fric) lo = mid; else hi = mid;
            }
            k = 0.5 * (lo + hi);
        }
        const double kk = k;
        ux = [kk](double x, double y) { return 0.3 * std::sin(pi * x) * std::cos(kk * (y - 0.5)); };
        uy = [kk](double x, double y) { return -0.2 * std::cos(kk * (x - 0.5)) * std::sin(pi * y); };
        for (int q = 0; q < ns; ++q) {
            const double base = std::log((1.0 + 0.3 * q) / (ns + 0.15 * ns * (ns - 1)));
            const double amp = 0.2 / (1.0 + q);
            w.push_back([base, amp, q](double x, double y) {
                return base + amp * std::cos(pi * x) * std::cos((1 + q % 2) * pi * y);
            });
        }
    }

    ScalarField sample(const GridSpec& g, const Field2& f) const {
        ScalarField out(g.size());
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) out[g.index(i, j)] = f(g.x(i), g.y(j));
        return out;
    }
};

struct Setup {
    GridSpec g;
    double eta;
    double lam;
    Regularization reg;
    const MixtureSpec& spec;
    const Manufactured& m;

    double rho(double x, double y) const { return m.M + m.r(x, y); }
    double dlam(double x, double y) const { return spec.D0 * (m.M + lam * m.r(x, y)); }
};

// Flow: mass and momentum sources of the manufactured (r, u) with
// ubar = u, theta_eff = lam e^z, f = 0.
void flow_sources(const Setup& s, ScalarField& smass, VectorField& smom) {
    const GridSpec& g = s.g;
    const Manufactured& m = s.m;
    const double eta = s.eta, gam = s.spec.gamma, lam = s.lam;
    Field2 rho = [&](double x, double y) { return s.rho(x, y); };
    Field2 mx = [&](double x, double y) { return rho(x, y) * m.ux(x, y); };
    Field2 my = [&](double x, double y) { return rho(x, y) * m.uy(x, y); };
    Field2 pres = [&](double x, double y) {
        const double r = rho(x, y);
        return std::pow(r, gam) + r * lam * std::exp(m.z(x, y));
    };
    Field2 sxx = [&](double x, double y) { return 2 * rho(x, y) * fd_dx(m.ux, x, y, eta); };
    Field2 syy = [&](double x, double y) { return 2 * rho(x, y) * fd_dy(m.uy, x, y, eta); };
    Field2 sxy = [&](double x, double y) { return rho(x, y) * (fd_dy(m.ux, x, y, eta) + fd_dx(m.uy, x, y, eta)); };
    smass.assign(g.size(), 0.0);
    smom = VectorField(g.size());
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const double x = g.x(i), y = g.y(j);
            const std::size_t p = g.index(i, j);
            smass[p] = fd_dx(mx, x, y, eta) + fd_dy(my, x, y, eta);
            const double vx = m.ux(x, y), vy = m.uy(x, y), r = rho(x, y);
            const double cx = lam * r * (vx * fd_dx(m.ux, x, y, eta) + vy * fd_dy(m.ux, x, y, eta));
            const double cy = lam * r * (vx * fd_dx(m.uy, x, y, eta) + vy * fd_dy(m.uy, x, y, eta));
            const double divx = fd_dx(sxx, x, y, eta) + fd_dy(sxy, x, y, eta);
            const double divy = fd_dx(sxy, x, y, eta) + fd_dy(syy, x, y, eta);
            smom.x[p] = cx - divx + fd_dx(pres, x, y, eta);
            smom.y[p] = cy - divy + fd_dy(pres, x, y, eta);
        }
}

// Species: per-species sources with ubar = u, thetabar = e^z, wbar = w, g = 1.
std::vector<ScalarField> species_sources(const Setup& s) {
    const GridSpec& g = s.g;
    const Manufactured& m = s.m;
    const double eta = s.eta, lam = s.lam, eps = s.reg.eps, delta = s.reg.delta;
    const int ns = m.ns;
    std::vector<ScalarField> out(ns, ScalarField(g.size()));
    std::vector<double> Y(ns), om(ns);
    for (int k = 0; k < ns; ++k) {
        const Field2& w = m.w[k];
        Field2 Yk = [&](double x, double y) { return std::exp(w(x, y)); };
        Field2 fx = [&](double x, double y) {
            return (s.dlam(x, y) * std::exp(w(x, y)) + eps) * fd_dx(w, x, y, eta);
        };
        Field2 fy = [&](double x, double y) {
            return (s.dlam(x, y) * std::exp(w(x, y)) + eps) * fd_dy(w, x, y, eta);
        };
        for (int j = 0; j <= g.ny; ++j)
            for (int i = 0; i <= g.nx; ++i) {
                const double x = g.x(i), y = g.y(j);
                const double wv = w(x, y), rho = s.rho(x, y);
                for (int q = 0; q < ns; ++q) Y[q] = std::exp(m.w[q](x, y));
                production_rates<double>(std::exp(m.z(x, y)), Y.data(), om.data(), s.spec);
                const double conv = lam * rho * (m.ux(x, y) * fd_dx(Yk, x, y, eta) + m.uy(x, y) * fd_dy(Yk, x, y, eta));
                out[k][g.index(i, j)] = eps * wv - (fd_dx(fx, x, y, eta) + fd_dy(fy, x, y, eta)) +
                                        delta * std::exp(wv) - delta / ns + conv - lam * rho * om[k];
            }
    }
    return out;
}

// Thermal: interior and boundary sources with u, w, wbar, zbar manufactured, Theta = 1.
void thermal_sources(const Setup& s, ScalarField& src, BoundaryFlux& gb) {
    const GridSpec& g = s.g;
    const Manufactured& m = s.m;
    const MixtureSpec& spec = s.spec;
    const double eta = s.eta, lam = s.lam, eps = s.reg.eps, delta = s.reg.delta;
    auto coeff = [&](double x, double y) {
        const double e = std::exp(m.z(x, y));
        return (delta + e) * spec.kappa0 * (1.0 + e * e * e) * (m.M + lam * m.r(x, y));
    };
    Field2 qx = [&](double x, double y) { return coeff(x, y) * fd_dx(m.z, x, y, eta); };
    Field2 qy = [&](double x, double y) { return coeff(x, y) * fd_dy(m.z, x, y, eta); };
    Field2 em = [&](double x, double y) {
        double acc = 0.0;
        for (int k = 0; k < m.ns; ++k) acc += spec.c_v[k] * std::exp(m.w[k](x, y));
        return std::exp(m.z(x, y)) * acc;
    };
    // sum_k thetabar c_pk F_k with F_k = -(D_lam e^w + eps) grad w.
    Field2 hx = [&](double x, double y) {
        double acc = 0.0;
        for (int k = 0; k < m.ns; ++k)
            acc -= spec.c_p(k) * (s.dlam(x, y) * std::exp(m.w[k](x, y)) + eps) * fd_dx(m.w[k], x, y, eta);
        return std::exp(m.z(x, y)) * acc;
    };
    Field2 hy = [&](double x, double y) {
        double acc = 0.0;
        for (int k = 0; k < m.ns; ++k)
            acc -= spec.c_p(k) * (s.dlam(x, y) * std::exp(m.w[k](x, y)) + eps) * fd_dy(m.w[k], x, y, eta);
        return std::exp(m.z(x, y)) * acc;
    };
    src.assign(g.size(), 0.0);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const double x = g.x(i), y = g.y(j);
            const double rho = s.rho(x, y), tb = std::exp(m.z(x, y));
            const double axx = fd_dx(m.ux, x, y, eta), axy = fd_dy(m.ux, x, y, eta);
            const double ayx = fd_dx(m.uy, x, y, eta), ayy = fd_dy(m.uy, x, y, eta);
            const double visc = rho * (2 * axx * axx + 2 * ayy * ayy + (axy + ayx) * (axy + ayx));
            const double comp = -lam * rho * tb * (axx + ayy);
            const double conv = -lam * rho * (m.ux(x, y) * fd_dx(em, x, y, eta) + m.uy(x, y) * fd_dy(em, x, y, eta));
            const double diff = -lam * (fd_dx(hx, x, y, eta) + fd_dy(hy, x, y, eta));
            const double lhs = -(fd_dx(qx, x, y, eta) + fd_dy(qy, x, y, eta));
            src[g.index(i, j)] = lhs - (visc + comp + conv + diff);
        }
    gb = BoundaryFlux::zeros(g);
    auto bsrc = [&](double x, double y, double nx, double ny) {
        const double zv = m.z(x, y), e = std::exp(zv);
        const double out = -(qx(x, y) * nx + qy(x, y) * ny);
        return out - spec.L0 * (1.0 + e * e * e) * (m.M + lam * m.r(x, y)) * (e - 1.0) - eps * zv;
    };
    for (int j = 0; j <= g.ny; ++j) {
        gb[Side::Left][j] = bsrc(0.0, g.y(j), -1.0, 0.0);
        gb[Side::Right][j] = bsrc(g.Lx, g.y(j), 1.0, 0.0);
    }
    for (int i = 0; i <= g.nx; ++i) {
        gb[Side::Bottom][i] = bsrc(g.x(i), 0.0, 0.0, -1.0);
        gb[Side::Top][i] = bsrc(g.x(i), g.Ly, 0.0, 1.0);
    }
}

struct Errors {
    double sq = 0.0;  // integrated squared error
    double max = 0.0;
    void add(const GridSpec& g, const ScalarField& a, const ScalarField& b) {
        ScalarField d(a.size());
        for (std::size_t p = 0; p < a.size(); ++p) {
            const double e = a[p] - b[p];
            d[p] = e * e;
            max = std::max(max, std::abs(e));
        }
        sq += integrate(g, d);
    }
};

}  // namespace

MmsTable run_mms(MmsCase kind, const MmsOptions& opt, const MixtureSpec& spec_in) {
    const MixtureSpec& spec = spec_in;
    MmsTable table;
    table.kind = kind;
    table.convection = opt.solver.convection == ConvectionScheme::Centered ? "centered" : "upwind";
    const Manufactured man(opt.M, spec.n, spec.f_fric);
    const Regularization reg = Regularization::from_delta(opt.delta);
    std::vector<double> hs, e2, em;

    for (int cells : opt.cells) {
        GridSpec g{1.0, 1.0, cells, cells};
        const Setup s{g, g.hx() / 4.0, opt.lambda, reg, spec, man};
        const ScalarField r = man.sample(g, man.r);
        VectorField u(g.size());
        u.x = man.sample(g, man.ux);
        u.y = man.sample(g, man.uy);
        const ScalarField z = man.sample(g, man.z);
        std::vector<ScalarField> w;
        for (const auto& f : man.w) w.push_back(man.sample(g, f));
        ScalarField theta_eff(g.size());
        for (std::size_t p = 0; p < g.size(); ++p) theta_eff[p] = opt.lambda * std::exp(z[p]);
        ScalarField theta_bar(g.size());
        for (std::size_t p = 0; p < g.size(); ++p) theta_bar[p] = std::exp(z[p]);

        Errors err;
        MmsRow row;
        row.cells = cells;
        row.h = g.hx();

        ScalarField r_h = r;
        VectorField u_h = u;
        std::vector<ScalarField> w_h = w;

        if (kind == MmsCase::Flow || kind == MmsCase::Coupled) {
            ScalarField smass;
            VectorField smom;
            flow_sources(s, smass, smom);
            FlowInputs in;
            in.M = opt.M;
            in.lambda = opt.lambda;
            in.ubar = &u;
            in.theta_eff = &theta_eff;
            in.source_mass = &smass;
            in.source_momentum = &smom;
            FlowSolver fs(g, spec, opt.solver);
            FlowResult fr = fs.solve(in);
            row.newton_iterations += fr.report.iterations;
            err.add(g, fr.r, r);
            err.add(g, fr.u.x, u.x);
            err.add(g, fr.u.y, u.y);
            r_h = fr.r;
            u_h = fr.u;
        }
        if (kind == MmsCase::Species || kind == MmsCase::Coupled) {
            const std::vector<ScalarField> src = species_sources(s);
            SpeciesInputs in;
            in.M = opt.M;
            in.lambda = opt.lambda;
            in.reg = reg;
            in.r = &r_h;
            in.ubar = &u;
            in.theta_bar = &theta_bar;
            in.w_bar = &w;
            in.source = &src;
            SpeciesSolver ss(g, spec, opt.solver);
            SpeciesResult sr = ss.solve(in);
            row.newton_iterations += sr.report.iterations;
            for (int k = 0; k < spec.n; ++k) err.add(g, sr.w[k], w[k]);
            w_h = sr.w;
        }
        if (kind == MmsCase::Thermal || kind == MmsCase::Coupled) {
            ScalarField src;
            BoundaryFlux gb;
            thermal_sources(s, src, gb);
            const BoundaryFlux Theta = BoundaryFlux::constant(g, 1.0);
            ThermalInputs in;
            in.M = opt.M;
            in.lambda = opt.lambda;
            in.reg = reg;
            in.r = &r_h;
            in.u = &u_h;
            in.z_bar = &z;
            in.w_bar = &w;
            in.w = &w_h;
            in.Theta = &Theta;
            in.boundary_source = &gb;
            in.source = &src;
            ThermalSolver ts(g, spec, opt.solver);
            ThermalResult tr = ts.solve(in);
            row.newton_iterations += tr.report.iterations;
            err.add(g, tr.z, z);
        }
        row.error_l2 = std::sqrt(err.sq);
        row.error_max = err.max;
        table.rows.push_back(row);
        hs.push_back(row.h);
        e2.push_back(row.error_l2);
        em.push_back(row.error_max);
    }
    if (hs.size() >= 2) {
        table.order_l2 = loglog_slope(hs, e2);
        table.order_max = loglog_slope(hs, em);
    }
    return table;
}

}  // namespace mixsteady
