#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "mixsteady/mixture.hpp"

namespace oracle {

// g_k = c_pk theta - theta (c_vk log theta - log(rho Y_k)), in long double.
inline std::vector<long double> gibbs(double rho, double theta, const std::vector<double>& Y,
                                      const mixsteady::MixtureSpec& spec) {
    std::vector<long double> g(Y.size());
    const long double lt = std::log(static_cast<long double>(theta));
    for (std::size_t k = 0; k < Y.size(); ++k) {
        const long double cv = spec.c_v[k];
        const long double s = cv * lt - std::log(static_cast<long double>(rho) * Y[k]);
        g[k] = (cv + 1.0L) * theta - theta * s;
    }
    return g;
}

// Rates from the full Gibbs functions, log(rho) included.
inline std::vector<long double> rates(double rho, double theta, const std::vector<double>& Y,
                                      const mixsteady::MixtureSpec& spec) {
    const auto g = gibbs(rho, theta, Y, spec);
    const std::size_t n = g.size();
    long double mean = 0.0L;
    for (auto v : g) mean += v;
    mean /= static_cast<long double>(n);
    std::vector<long double> v(n), w(n);
    long double vmax = 0.0L;
    for (std::size_t k = 0; k < n; ++k) {
        v[k] = (g[k] - mean) / theta;
        vmax = std::max(vmax, std::fabs(v[k]));
    }
    const long double s = vmax > spec.B_omega ? spec.B_omega / vmax : 1.0L;
    for (std::size_t k = 0; k < n; ++k) w[k] = -spec.Lambda * s * v[k];
    return w;
}

// Root of a continuous increasing f on [a, b] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double a, double b) {
    for (int it = 0; it < 400 && b - a > 0.0; ++it) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        (f(m) > 0.0 ? b : a) = m;
    }
    return 0.5 * (a + b);
}

// Least-squares slope of log y against log x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = std::log(x[k]), b = std::log(std::abs(y[k]));
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
