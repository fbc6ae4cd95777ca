#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <limits>
#include <random>

#include "mixsteady/errors.hpp"
#include "mixsteady/grid.hpp"
#include "mixsteady/kernels.hpp"
#include "oracles.hpp"

using namespace mixsteady;

namespace {

ScalarField sample(const GridSpec& g, double (*f)(double, double)) {
    ScalarField v(g.size());
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) v[g.index(i, j)] = f(g.x(i), g.y(j));
    return v;
}

double smooth(double x, double y) { return std::sin(2.0 * x + 0.3) * std::cos(1.5 * y) + x * y * y; }

ScalarField random_field(const GridSpec& g, unsigned seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(lo, hi);
    ScalarField v(g.size());
    for (auto& x : v) x = U(rng);
    return v;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("layout") {
    GridSpec g{2.0, 1.0, 8, 4};
    CHECK(g.size() == 45);
    CHECK(g.index(3, 2) == 21);
    CHECK(g.hx() == 0.25);
    CHECK(g.weight(0, 0) == doctest::Approx(0.25 * 0.25 * 0.25));
    GridSpec bad{-1.0, 1.0, 4, 64};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("trapezoid quadrature is exact for bilinear fields and second order otherwise") {
    GridSpec g{1.0, 2.0, 16, 16};
    auto bil = sample(g, [](double x, double y) { return 1.0 + 2.0 * x - y + 3.0 * x * y; });
    CHECK(integrate(g, bil) == doctest::Approx(2.0 + 2.0 - 2.0 + 3.0).epsilon(1e-14));
    std::vector<double> h, e;
    for (int n : {16, 32, 64}) {
        GridSpec gn{1.0, 1.0, n, n};
        auto f = sample(gn, [](double x, double y) { return std::exp(x + 0.5 * y); });
        h.push_back(1.0 / n);
        e.push_back(std::abs(integrate(gn, f) - (std::exp(1.0) - 1.0) * 2.0 * (std::exp(0.5) - 1.0)));
    }
    CHECK(oracle::slope(h, e) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("boundary integral of a constant is the perimeter") {
    GridSpec g{2.0, 3.0, 10, 12};
    ScalarField one(g.size(), 1.0);
    CHECK(integrate_boundary(g, one) == doctest::Approx(10.0));
    CHECK(integrate_boundary(g, BoundaryFlux::constant(g, 2.0)) == doctest::Approx(20.0));
}

TEST_CASE("gradient is exact on quadratics and second order on smooth fields") {
    GridSpec g{1.0, 1.0, 12, 10};
    auto q = sample(g, [](double x, double y) { return x * x - 3 * x * y + 2 * y * y; });
    auto d = gradient(g, q);
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) {
            CHECK(d.x[g.index(i, j)] == doctest::Approx(2 * g.x(i) - 3 * g.y(j)).epsilon(1e-10).scale(1.0));
            CHECK(d.y[g.index(i, j)] == doctest::Approx(-3 * g.x(i) + 4 * g.y(j)).epsilon(1e-10).scale(1.0));
        }
    std::vector<double> h, e;
    for (int n : {16, 32, 64}) {
        GridSpec gn{1.0, 1.0, n, n};
        auto gr = gradient(gn, sample(gn, smooth));
        double err = 0;
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                const double x = gn.x(i), y = gn.y(j);
                err = std::max(err, std::abs(gr.x[gn.index(i, j)] - (2 * std::cos(2 * x + 0.3) * std::cos(1.5 * y) + y * y)));
            }
        h.push_back(1.0 / n);
        e.push_back(err);
    }
    CHECK(oracle::slope(h, e) > 1.9);
}

TEST_CASE("div_a_grad telescopes: zero net flux without boundary data") {
    GridSpec g{1.0, 1.0, 20, 20};
    auto a = random_field(g, 3, 0.5, 2.0);
    auto f = random_field(g, 4, -1.0, 1.0);
    auto L = div_a_grad(g, a, f);
    CHECK(std::abs(integrate(g, L)) < 1e-12);
    auto q = BoundaryFlux::constant(g, 0.25);
    auto Lq = div_a_grad(g, a, f, &q);
    CHECK(integrate(g, Lq) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("norms on known fields") {
    GridSpec g{1.0, 1.0, 64, 64};
    auto x = sample(g, [](double x, double) { return x; });
    CHECK(norm(g, x, NormKind::Lp, 2.0) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-4));
    CHECK(norm(g, x, NormKind::W1p, 2.0) == doctest::Approx(std::sqrt(1.0 / 3.0) + 1.0).epsilon(1e-4));
    CHECK(norm(g, x, NormKind::W2p, 2.0) == doctest::Approx(std::sqrt(1.0 / 3.0) + 1.0).epsilon(1e-4));
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(norm(g, x, NormKind::Lp, inf) == 1.0);
    ScalarField one(g.size(), 1.0);
    CHECK(norm(g, one, NormKind::L2Boundary) == doctest::Approx(2.0));
    VectorField v(g.size());
    v.x = ScalarField(g.size(), 3.0);
    v.y = ScalarField(g.size(), 4.0);
    CHECK(norm(g, v, NormKind::Lp, 4.0) == doctest::Approx(5.0));
    CHECK_THROWS(norm(g, x, NormKind::Lp, 0.5));
}

TEST_CASE("trace samples the boundary nodes") {
    GridSpec g{1.0, 1.0, 8, 8};
    auto f = sample(g, [](double x, double y) { return x + 10 * y; });
    auto b = trace(g, f);
    CHECK(b[Side::Left][3] == doctest::Approx(10 * g.y(3)));
    CHECK(b[Side::Top][8] == doctest::Approx(11.0));
}

TEST_CASE("parallel kernels match the serial reference") {
    GridSpec g{1.3, 0.7, 97, 83};
    auto f = random_field(g, 11, -1.0, 1.0);
    auto c = random_field(g, 12, 0.2, 3.0);
    auto vy = random_field(g, 13, -1.0, 1.0);
    const int saved = omp_get_max_threads();
    for (int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        ScalarField ax(g.size()), ay(g.size()), bx(g.size()), by(g.size());
        kernels::gradient(g, f.data(), ax.data(), ay.data());
        serial::gradient(g, f.data(), bx.data(), by.data());
        // Same stencils, different operation order: agreement to rounding.
        auto close = [](const ScalarField& a, const ScalarField& b) {
            double m = 0, s = 0;
            for (std::size_t p = 0; p < a.size(); ++p) {
                m = std::max(m, std::abs(a[p] - b[p]));
                s = std::max(s, std::abs(b[p]));
            }
            return m <= 1e-13 * s;
        };
        CHECK(close(ax, bx));
        CHECK(close(ay, by));

        ScalarField dp(g.size()), ds(g.size());
        kernels::divergence(g, f.data(), vy.data(), dp.data());
        serial::divergence(g, f.data(), vy.data(), ds.data());
        CHECK(close(dp, ds));

        kernels::div_c_grad(g, c.data(), f.data(), dp.data());
        serial::div_c_grad(g, c.data(), f.data(), ds.data());
        CHECK(close(dp, ds));

        CHECK(kernels::integrate(g, f.data()) == doctest::Approx(serial::integrate(g, f.data())).epsilon(1e-13));
    }
    omp_set_num_threads(saved);
}

TEST_CASE("parallel results do not depend on the thread count") {
    GridSpec g{1.0, 1.0, 128, 128};
    auto f = random_field(g, 21, -1.0, 1.0);
    omp_set_num_threads(1);
    const double one = kernels::integrate(g, f.data());
    omp_set_num_threads(3);
    const double three = kernels::integrate(g, f.data());
    omp_set_num_threads(omp_get_num_procs());
    CHECK(one == three);
}

}
