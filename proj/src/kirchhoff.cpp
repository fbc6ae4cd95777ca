#include "mixsteady/kirchhoff.hpp"

#include <cmath>
#include <limits>

#include "mixsteady/errors.hpp"

namespace mixsteady {

static void check_params(double D0M, double eps) {
    if (!(eps > 0.0)) throw DomainError("kirchhoff: eps must be positive");
    if (!(D0M >= 0.0)) throw DomainError("kirchhoff: D0M must be nonnegative");
}

double kirchhoff(double w, double D0M, double eps) {
    check_params(D0M, eps);
    return D0M * std::expm1(w) + eps * w;
}

double kirchhoff_slope(double w, double D0M, double eps) { return D0M * std::exp(w) + eps; }

double kirchhoff_inverse(double W, double D0M, double eps) {
    check_params(D0M, eps);
    if (!std::isfinite(W)) throw DomainError("kirchhoff_inverse: W must be finite");

    // Leading-order guess from whichever term dominates.
    double w = (D0M > 0.0 && W > -D0M) ? std::log1p(W / D0M) : (W + D0M) / eps;

    double lo = w, hi = w;
    double step = 1.0;
    if (kirchhoff(w, D0M, eps) < W) {
        do {
            lo = hi;
            hi += step;
            step *= 2.0;
        } while (kirchhoff(hi, D0M, eps) < W);
    } else {
        do {
            hi = lo;
            lo -= step;
            step *= 2.0;
        } while (kirchhoff(lo, D0M, eps) > W);
    }

    w = 0.5 * (lo + hi);
    double width = hi - lo;
    for (int it = 0; it < 400; ++it) {
        const double f = kirchhoff(w, D0M, eps) - W;
        if (f == 0.0) return w;
        if (f < 0.0) lo = w; else hi = w;
        const double next = w - f / kirchhoff_slope(w, D0M, eps);
        // Newton only while it shrinks the bracket at least as fast as bisection.
        const bool fast = std::abs(next - w) <= 0.5 * width;
        width = hi - lo;
        if (fast && next > lo && next < hi) {
            if (std::abs(next - w) <= 1e-15 * (1.0 + std::abs(w))) return next;
            w = next;
        } else {
            w = 0.5 * (lo + hi);
            if (w == lo || w == hi) return w;
        }
    }
    return w;
}

}  // namespace mixsteady
