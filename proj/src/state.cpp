#include "mixsteady/state.hpp"

#include <cmath>

namespace mixsteady {

FieldState FieldState::initial(const GridSpec& g, double M, int n, double theta0) {
    FieldState s;
    s.grid = g;
    s.M = M;
    s.r.assign(g.size(), 0.0);
    s.u = VectorField(g.size());
    s.z.assign(g.size(), std::log(theta0));
    s.w.assign(static_cast<std::size_t>(n), ScalarField(g.size(), std::log(1.0 / n)));
    return s;
}

ScalarField FieldState::rho() const {
    ScalarField out(r.size());
    for (std::size_t p = 0; p < r.size(); ++p) out[p] = M + r[p];
    return out;
}

ScalarField FieldState::theta() const {
    ScalarField out(z.size());
    for (std::size_t p = 0; p < z.size(); ++p) out[p] = std::exp(z[p]);
    return out;
}

std::vector<ScalarField> FieldState::Y() const {
    std::vector<ScalarField> out(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        out[k].resize(w[k].size());
        for (std::size_t p = 0; p < w[k].size(); ++p) out[k][p] = std::exp(w[k][p]);
    }
    return out;
}

bool FieldState::finite() const {
    auto ok = [](const ScalarField& f) {
        for (double v : f)
            if (!std::isfinite(v)) return false;
        return true;
    };
    if (!ok(r) || !ok(u.x) || !ok(u.y) || !ok(z)) return false;
    for (const auto& f : w)
        if (!ok(f)) return false;
    return true;
}

PhysicalState PhysicalState::from(const FieldState& s) {
    return {s.grid, s.M, s.r, s.u, s.theta(), s.Y()};
}

FieldState PhysicalState::to_fields() const {
    FieldState s;
    s.grid = grid;
    s.M = M;
    s.r = r;
    s.u = u;
    s.z.resize(theta.size());
    for (std::size_t p = 0; p < theta.size(); ++p) s.z[p] = std::log(theta[p]);
    s.w.resize(Y.size());
    for (std::size_t k = 0; k < Y.size(); ++k) {
        s.w[k].resize(Y[k].size());
        for (std::size_t p = 0; p < Y[k].size(); ++p) s.w[k][p] = std::log(Y[k][p]);
    }
    return s;
}

void SubsolverConfig::validate() const {
    std::vector<Violation> v;
    if (!(newton.tol > 0.0)) v.push_back({"newton_tol", "> 0 required"});
    if (newton.max_iter < 1) v.push_back({"max_newton", ">= 1 required"});
    if (!(newton.backtrack > 0.0 && newton.backtrack < 1.0)) v.push_back({"backtrack", "in (0,1) required"});
    if (!v.empty()) throw ValidationError(std::move(v));
}

double mean(const GridSpec& g, std::span<const double> f) { return integrate(g, f) / (g.Lx * g.Ly); }

void project_mean_zero(const GridSpec& g, ScalarField& f) {
    const double m = mean(g, f);
    for (double& v : f) v -= m;
}

}  // namespace mixsteady
