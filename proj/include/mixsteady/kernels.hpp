#pragma once

// Node-parallel stencil kernels shared by the grid operators and the
// residual evaluations. Templated on the scalar so the Newton driver can run
// them on dual numbers. Loops split over rows; every node is written by one
// thread only, so results do not depend on the thread count.

#include <cstddef>
#include <vector>

#include "mixsteady/grid.hpp"

namespace mixsteady::kernels {

template <class T>
void gradient(const GridSpec& g, const T* f, T* gx, T* gy) {
    const int nx = g.nx, ny = g.ny, px = g.px();
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
#pragma omp parallel for schedule(static)
    for (int j = 0; j <= ny; ++j) {
        const T* row = f + static_cast<std::size_t>(j) * px;
        T* ox = gx + static_cast<std::size_t>(j) * px;
        T* oy = gy + static_cast<std::size_t>(j) * px;
        ox[0] = (-3.0 * row[0] + 4.0 * row[1] - row[2]) * (0.5 * ihx);
        for (int i = 1; i < nx; ++i) ox[i] = (row[i + 1] - row[i - 1]) * (0.5 * ihx);
        ox[nx] = (3.0 * row[nx] - 4.0 * row[nx - 1] + row[nx - 2]) * (0.5 * ihx);

        if (j == 0) {
            const T* r1 = row + px;
            const T* r2 = row + 2 * px;
            for (int i = 0; i <= nx; ++i) oy[i] = (-3.0 * row[i] + 4.0 * r1[i] - r2[i]) * (0.5 * ihy);
        } else if (j == ny) {
            const T* r1 = row - px;
            const T* r2 = row - 2 * px;
            for (int i = 0; i <= nx; ++i) oy[i] = (3.0 * row[i] - 4.0 * r1[i] + r2[i]) * (0.5 * ihy);
        } else {
            const T* up = row + px;
            const T* dn = row - px;
            for (int i = 0; i <= nx; ++i) oy[i] = (up[i] - dn[i]) * (0.5 * ihy);
        }
    }
}

template <class T>
void divergence(const GridSpec& g, const T* vx, const T* vy, T* out) {
    const std::size_t n = g.size();
    std::vector<T> ax(n), ay(n), bx(n), by(n);
    gradient(g, vx, ax.data(), ay.data());
    gradient(g, vy, bx.data(), by.data());
#pragma omp parallel for schedule(static)
    for (std::size_t p = 0; p < n; ++p) out[p] = ax[p] + by[p];
}

// out = div(c grad f) in flux form, zero flux through the boundary.
template <class T, class C>
void div_c_grad(const GridSpec& g, const C* c, const T* f, T* out) {
    const int nx = g.nx, ny = g.ny, px = g.px();
    const double hx = g.hx(), hy = g.hy();
#pragma omp parallel for schedule(static)
    for (int j = 0; j <= ny; ++j) {
        const double sy = 1.0 / (hy * g.wy(j));
        const std::size_t base = static_cast<std::size_t>(j) * px;
        for (int i = 0; i <= nx; ++i) {
            const std::size_t p = base + i;
            const double sx = 1.0 / (hx * g.wx(i));
            T acc = T(0.0);
            if (i < nx) acc += 0.5 * (c[p] + c[p + 1]) * (f[p + 1] - f[p]) * sx;
            if (i > 0) acc += 0.5 * (c[p] + c[p - 1]) * (f[p - 1] - f[p]) * sx;
            if (j < ny) acc += 0.5 * (c[p] + c[p + px]) * (f[p + px] - f[p]) * sy;
            if (j > 0) acc += 0.5 * (c[p] + c[p - px]) * (f[p - px] - f[p]) * sy;
            out[p] = acc;
        }
    }
}

// Face fluxes: Fe has nx*(ny+1) entries (face between i and i+1 on row j at
// j*nx + i), Fn has (nx+1)*ny entries (face between j and j+1 at j*(nx+1) + i).
// Both oriented along +x / +y. out = (1/w) * sum of outward flux * face length.
template <class T>
void face_divergence(const GridSpec& g, const T* Fe, const T* Fn, T* out) {
    const int nx = g.nx, ny = g.ny, px = g.px();
#pragma omp parallel for schedule(static)
    for (int j = 0; j <= ny; ++j) {
        const double iwy = 1.0 / g.wy(j);
        for (int i = 0; i <= nx; ++i) {
            const double iwx = 1.0 / g.wx(i);
            T acc = T(0.0);
            if (i < nx) acc += Fe[static_cast<std::size_t>(j) * nx + i] * iwx;
            if (i > 0) acc -= Fe[static_cast<std::size_t>(j) * nx + i - 1] * iwx;
            if (j < ny) acc += Fn[static_cast<std::size_t>(j) * px + i] * iwy;
            if (j > 0) acc -= Fn[static_cast<std::size_t>(j - 1) * px + i] * iwy;
            out[static_cast<std::size_t>(j) * px + i] = acc;
        }
    }
}

// out -= q / w_normal on every boundary node, q the outward flux per unit
// length given per side (corners collect both sides).
template <class T, class Q>
void subtract_boundary_outflux(const GridSpec& g, const Q* left, const Q* right, const Q* bottom, const Q* top,
                               T* out) {
    const int nx = g.nx, ny = g.ny;
    for (int j = 0; j <= ny; ++j) {
        out[g.index(0, j)] -= left[j] * (1.0 / g.wx(0));
        out[g.index(nx, j)] -= right[j] * (1.0 / g.wx(nx));
    }
    for (int i = 0; i <= nx; ++i) {
        out[g.index(i, 0)] -= bottom[i] * (1.0 / g.wy(0));
        out[g.index(i, ny)] -= top[i] * (1.0 / g.wy(ny));
    }
}

// Trapezoid quadrature. Row partials are summed in fixed row order.
inline double integrate(const GridSpec& g, const double* f) {
    const int nx = g.nx, ny = g.ny, px = g.px();
    std::vector<double> partial(static_cast<std::size_t>(ny) + 1);
#pragma omp parallel for schedule(static)
    for (int j = 0; j <= ny; ++j) {
        const double* row = f + static_cast<std::size_t>(j) * px;
        double s = 0.5 * (row[0] + row[nx]);
        for (int i = 1; i < nx; ++i) s += row[i];
        partial[j] = s * g.hx() * g.wy(j);
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

}  // namespace mixsteady::kernels

namespace mixsteady::serial {

// Straightforward single-threaded reference versions of the grid kernels,
// written node by node. Kept for equivalence tests and the benchmark.
void gradient(const GridSpec& g, const double* f, double* gx, double* gy);
void divergence(const GridSpec& g, const double* vx, const double* vy, double* out);
void div_c_grad(const GridSpec& g, const double* c, const double* f, double* out);
double integrate(const GridSpec& g, const double* f);

}  // namespace mixsteady::serial
