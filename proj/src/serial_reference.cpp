#include "mixsteady/kernels.hpp"

namespace mixsteady::serial {

namespace {

double d_dx(const GridSpec& g, const double* f, int i, int j) {
    const double h = g.hx();
    if (i == 0) return (-3.0 * f[g.index(0, j)] + 4.0 * f[g.index(1, j)] - f[g.index(2, j)]) / (2.0 * h);
    if (i == g.nx)
        return (3.0 * f[g.index(g.nx, j)] - 4.0 * f[g.index(g.nx - 1, j)] + f[g.index(g.nx - 2, j)]) / (2.0 * h);
    return (f[g.index(i + 1, j)] - f[g.index(i - 1, j)]) / (2.0 * h);
}

double d_dy(const GridSpec& g, const double* f, int i, int j) {
    const double h = g.hy();
    if (j == 0) return (-3.0 * f[g.index(i, 0)] + 4.0 * f[g.index(i, 1)] - f[g.index(i, 2)]) / (2.0 * h);
    if (j == g.ny)
        return (3.0 * f[g.index(i, g.ny)] - 4.0 * f[g.index(i, g.ny - 1)] + f[g.index(i, g.ny - 2)]) / (2.0 * h);
    return (f[g.index(i, j + 1)] - f[g.index(i, j - 1)]) / (2.0 * h);
}

}  // namespace

void gradient(const GridSpec& g, const double* f, double* gx, double* gy) {
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            gx[g.index(i, j)] = d_dx(g, f, i, j);
            gy[g.index(i, j)] = d_dy(g, f, i, j);
        }
}

void divergence(const GridSpec& g, const double* vx, const double* vy, double* out) {
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) out[g.index(i, j)] = d_dx(g, vx, i, j) + d_dy(g, vy, i, j);
}

void div_c_grad(const GridSpec& g, const double* c, const double* f, double* out) {
    // Accumulate face by face: each interior face flux is added to one
    // neighbour and subtracted from the other.
    const std::size_t n = g.size();
    for (std::size_t p = 0; p < n; ++p) out[p] = 0.0;
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t a = g.index(i, j), b = g.index(i + 1, j);
            const double flux = 0.5 * (c[a] + c[b]) * (f[b] - f[a]) / g.hx() * g.wy(j);
            out[a] += flux;
            out[b] -= flux;
        }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            const std::size_t a = g.index(i, j), b = g.index(i, j + 1);
            const double flux = 0.5 * (c[a] + c[b]) * (f[b] - f[a]) / g.hy() * g.wx(i);
            out[a] += flux;
            out[b] -= flux;
        }
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) out[g.index(i, j)] /= g.weight(i, j);
}

double integrate(const GridSpec& g, const double* f) {
    double s = 0.0;
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) s += g.weight(i, j) * f[g.index(i, j)];
    return s;
}

}  // namespace mixsteady::serial
