#include "mixsteady/grid.hpp"

#include <cmath>
#include <limits>

#include "mixsteady/errors.hpp"
#include "mixsteady/kernels.hpp"

namespace mixsteady {

void GridSpec::validate() const {
    std::vector<Violation> v;
    if (!(Lx > 0.0)) v.push_back({"Lx", "> 0 required"});
    if (!(Ly > 0.0)) v.push_back({"Ly", "> 0 required"});
    if (nx < 8) v.push_back({"nx", ">= 8 required"});
    if (ny < 8) v.push_back({"ny", ">= 8 required"});
    if (!v.empty()) throw ValidationError(std::move(v));
}

BoundaryFlux BoundaryFlux::zeros(const GridSpec& g) { return constant(g, 0.0); }

BoundaryFlux BoundaryFlux::constant(const GridSpec& g, double v) {
    BoundaryFlux b;
    b[Side::Left].assign(g.py(), v);
    b[Side::Right].assign(g.py(), v);
    b[Side::Bottom].assign(g.px(), v);
    b[Side::Top].assign(g.px(), v);
    return b;
}

BoundaryFlux trace(const GridSpec& g, std::span<const double> f) {
    BoundaryFlux b = BoundaryFlux::zeros(g);
    for (int j = 0; j <= g.ny; ++j) {
        b[Side::Left][j] = f[g.index(0, j)];
        b[Side::Right][j] = f[g.index(g.nx, j)];
    }
    for (int i = 0; i <= g.nx; ++i) {
        b[Side::Bottom][i] = f[g.index(i, 0)];
        b[Side::Top][i] = f[g.index(i, g.ny)];
    }
    return b;
}

VectorField gradient(const GridSpec& g, std::span<const double> f) {
    VectorField out(g.size());
    kernels::gradient(g, f.data(), out.x.data(), out.y.data());
    return out;
}

ScalarField divergence(const GridSpec& g, const VectorField& v) {
    ScalarField out(g.size());
    kernels::divergence(g, v.x.data(), v.y.data(), out.data());
    return out;
}

SecondDifferences second_differences(const GridSpec& g, std::span<const double> f) {
    const VectorField d = gradient(g, f);
    SecondDifferences s;
    s.xx.resize(g.size());
    s.xy.resize(g.size());
    s.yx.resize(g.size());
    s.yy.resize(g.size());
    kernels::gradient(g, d.x.data(), s.xx.data(), s.xy.data());
    kernels::gradient(g, d.y.data(), s.yx.data(), s.yy.data());
    return s;
}

ScalarField div_a_grad(const GridSpec& g, std::span<const double> a, std::span<const double> f,
                       const BoundaryFlux* outward_flux) {
    for (std::size_t p = 0; p < a.size(); ++p)
        if (!(a[p] > 0.0)) throw DomainError("div_a_grad: coefficient must be positive at node " + std::to_string(p));
    ScalarField out(g.size());
    kernels::div_c_grad(g, a.data(), f.data(), out.data());
    if (outward_flux) {
        const auto& b = *outward_flux;
        kernels::subtract_boundary_outflux(g, b[Side::Left].data(), b[Side::Right].data(), b[Side::Bottom].data(),
                                           b[Side::Top].data(), out.data());
    }
    return out;
}

double integrate(const GridSpec& g, std::span<const double> f) { return kernels::integrate(g, f.data()); }

double integrate_boundary(const GridSpec& g, const BoundaryFlux& b) {
    double lr = 0.0, bt = 0.0;
    for (int j = 0; j <= g.ny; ++j) lr += g.wy(j) * (b[Side::Left][j] + b[Side::Right][j]);
    for (int i = 0; i <= g.nx; ++i) bt += g.wx(i) * (b[Side::Bottom][i] + b[Side::Top][i]);
    return lr + bt;
}

double integrate_boundary(const GridSpec& g, std::span<const double> f) {
    return integrate_boundary(g, trace(g, f));
}

static void check_p(double p) {
    if (!(p >= 1.0)) throw DomainError("norm: p must lie in [1, inf]");
}

double lp_of_magnitude(const GridSpec& g, const std::vector<const double*>& comps, double p) {
    check_p(p);
    const std::size_t n = g.size();
    ScalarField mag(n);
    for (std::size_t q = 0; q < n; ++q) {
        if (comps.size() == 1) {
            mag[q] = std::abs(comps[0][q]);
        } else {
            double s = 0.0;
            for (const double* c : comps) s += c[q] * c[q];
            mag[q] = std::sqrt(s);
        }
    }
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : mag) m = std::max(m, v);
        return m;
    }
    for (double& v : mag) v = std::pow(v, p);
    return std::pow(kernels::integrate(g, mag.data()), 1.0 / p);
}

double norm(const GridSpec& g, const std::vector<ScalarField>& comps, NormKind kind, double p) {
    check_p(p);
    std::vector<const double*> vals;
    for (const auto& c : comps) vals.push_back(c.data());
    if (kind == NormKind::L2Boundary) {
        double s = 0.0;
        for (const auto& c : comps) {
            ScalarField sq(c.size());
            for (std::size_t q = 0; q < c.size(); ++q) sq[q] = c[q] * c[q];
            s += integrate_boundary(g, sq);
        }
        return std::sqrt(s);
    }
    double total = lp_of_magnitude(g, vals, p);
    if (kind == NormKind::Lp) return total;

    std::vector<VectorField> grads;
    grads.reserve(comps.size());
    std::vector<const double*> gvals;
    for (const auto& c : comps) grads.push_back(gradient(g, c));
    for (const auto& d : grads) {
        gvals.push_back(d.x.data());
        gvals.push_back(d.y.data());
    }
    total += lp_of_magnitude(g, gvals, p);
    if (kind == NormKind::W1p) return total;

    std::vector<SecondDifferences> hess;
    hess.reserve(comps.size());
    std::vector<const double*> hvals;
    for (const auto& c : comps) hess.push_back(second_differences(g, c));
    for (const auto& h : hess) {
        hvals.push_back(h.xx.data());
        hvals.push_back(h.xy.data());
        hvals.push_back(h.yx.data());
        hvals.push_back(h.yy.data());
    }
    return total + lp_of_magnitude(g, hvals, p);
}

double norm(const GridSpec& g, std::span<const double> f, NormKind kind, double p) {
    return norm(g, std::vector<ScalarField>{ScalarField(f.begin(), f.end())}, kind, p);
}

double norm(const GridSpec& g, const VectorField& v, NormKind kind, double p) {
    return norm(g, std::vector<ScalarField>{v.x, v.y}, kind, p);
}

}  // namespace mixsteady
