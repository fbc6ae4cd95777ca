#pragma once

#include "mixsteady/dual.hpp"

namespace mixsteady {

// H(w) = D0M (e^w - 1) + eps w, the antiderivative of h(x) = D0M e^x + eps
// with H(0) = 0. Strictly increasing for eps > 0.
double kirchhoff(double w, double D0M, double eps);
double kirchhoff_slope(double w, double D0M, double eps);

// Safeguarded Newton on a monotone bracket, iterated to rounding level.
double kirchhoff_inverse(double W, double D0M, double eps);

inline Dual kirchhoff_inverse(const Dual& W, double D0M, double eps) {
    const double w = kirchhoff_inverse(W.v, D0M, eps);
    return {w, W.d / kirchhoff_slope(w, D0M, eps)};
}

}  // namespace mixsteady
