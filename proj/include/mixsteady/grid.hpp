#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mixsteady {

// Node (i, j) sits at (i*hx, j*hy), i = 0..nx, j = 0..ny. Storage is row-major
// in j: index = j*(nx+1) + i. Every node owns a control volume equal to its
// trapezoid weight (half cells on edges, quarter cells at corners).
struct GridSpec {
    double Lx = 1.0;
    double Ly = 1.0;
    int nx = 64;
    int ny = 64;

    double hx() const { return Lx / nx; }
    double hy() const { return Ly / ny; }
    int px() const { return nx + 1; }
    int py() const { return ny + 1; }
    std::size_t size() const { return static_cast<std::size_t>(px()) * static_cast<std::size_t>(py()); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(px()) + static_cast<std::size_t>(i);
    }
    double x(int i) const { return i * hx(); }
    double y(int j) const { return j * hy(); }
    double wx(int i) const { return (i == 0 || i == nx) ? 0.5 * hx() : hx(); }
    double wy(int j) const { return (j == 0 || j == ny) ? 0.5 * hy() : hy(); }
    double weight(int i, int j) const { return wx(i) * wy(j); }
    bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx || j == ny; }

    // Throws ValidationError.
    void validate() const;
};

using ScalarField = std::vector<double>;

struct VectorField {
    ScalarField x;
    ScalarField y;
    VectorField() = default;
    explicit VectorField(std::size_t n) : x(n, 0.0), y(n, 0.0) {}
};

enum class Side { Left = 0, Right = 1, Bottom = 2, Top = 3 };

// Per-side nodal boundary data. Left/Right are indexed by j (ny+1 values),
// Bottom/Top by i (nx+1 values). Corner nodes appear on two sides.
struct BoundaryFlux {
    std::array<std::vector<double>, 4> side;

    static BoundaryFlux zeros(const GridSpec& g);
    static BoundaryFlux constant(const GridSpec& g, double v);
    std::vector<double>& operator[](Side s) { return side[static_cast<int>(s)]; }
    const std::vector<double>& operator[](Side s) const { return side[static_cast<int>(s)]; }
};

// Boundary data sampled from a nodal field.
BoundaryFlux trace(const GridSpec& g, std::span<const double> f);

VectorField gradient(const GridSpec& g, std::span<const double> f);
ScalarField divergence(const GridSpec& g, const VectorField& v);

struct SecondDifferences {
    ScalarField xx, xy, yx, yy;
};
SecondDifferences second_differences(const GridSpec& g, std::span<const double> f);

// Conservative div(a grad f) with arithmetic face averages of a. The optional
// outward flux q (per unit length) enters as -q on each boundary face.
ScalarField div_a_grad(const GridSpec& g, std::span<const double> a, std::span<const double> f,
                       const BoundaryFlux* outward_flux = nullptr);

double integrate(const GridSpec& g, std::span<const double> f);
double integrate_boundary(const GridSpec& g, std::span<const double> f);
double integrate_boundary(const GridSpec& g, const BoundaryFlux& b);

enum class NormKind { Lp, W1p, W2p, L2Boundary };

// p = infinity is passed as std::numeric_limits<double>::infinity().
// Multi-component norms use the pointwise Euclidean magnitude across components.
double norm(const GridSpec& g, std::span<const double> f, NormKind kind, double p = 2.0);
double norm(const GridSpec& g, const VectorField& v, NormKind kind, double p = 2.0);
double norm(const GridSpec& g, const std::vector<ScalarField>& comps, NormKind kind, double p = 2.0);

// Lp norm of pointwise magnitudes sqrt(sum_c f_c^2).
double lp_of_magnitude(const GridSpec& g, const std::vector<const double*>& comps, double p);

}  // namespace mixsteady
