#include <doctest.h>

#include <random>

#include "mixsteady/mixture.hpp"
#include "oracles.hpp"

using namespace mixsteady;

TEST_SUITE("mixture") {

TEST_CASE("pressure closed forms") {
    MixtureSpec s;
    s.gamma = 2.0;
    s.c_v = {1.0, 1.0};
    CHECK(pressure(ThermoPoint{1.0, 1.0, {0.5, 0.5}}, s) == doctest::Approx(2.0));
    s.gamma = 3.0;
    CHECK(pressure(ThermoPoint{2.0, 2.0, {0.5, 0.5}}, s) == doctest::Approx(12.0));
    CHECK(pressure(2.0, 2.0, 3.0) == doctest::Approx(12.0));
}

TEST_CASE("cold energy and pressure are linked through rho^2 e_c'") {
    MixtureSpec s;
    for (double rho : {0.3, 1.0, 7.5, 120.0}) {
        const double h = 1e-6 * rho;
        auto ec = [&](double r) { return internal_energy(ThermoPoint{r, 1.0, {0.5, 0.5}}, s) - 2.0; };
        const double dec = (ec(rho + h) - ec(rho - h)) / (2 * h);
        CHECK(rho * rho * dec == doctest::Approx(std::pow(rho, s.gamma)).epsilon(1e-6));
    }
}

TEST_CASE("entropy and Gibbs functions at hand-checked points") {
    MixtureSpec s;
    s.n = 1;
    s.c_v = {1.0};
    auto a = entropy_gibbs(ThermoPoint{1.0, 1.0, {1.0}}, s);
    CHECK(a.s_k[0] == 0.0);
    CHECK(a.h_k[0] == 2.0);
    CHECK(a.g_k[0] == 2.0);
    auto b = entropy_gibbs(ThermoPoint{std::exp(1.0), 1.0, {1.0}}, s);
    CHECK(b.s_k[0] == doctest::Approx(-1.0));
    const double e = std::exp(1.0);
    auto c = entropy_gibbs(ThermoPoint{1.0, e, {1.0}}, s);
    CHECK(c.s_k[0] == doctest::Approx(1.0));
    CHECK(c.h_k[0] == doctest::Approx(2 * e));
    CHECK(c.g_k[0] == doctest::Approx(e));
}

TEST_CASE("entropy_gibbs rejects nonpositive partial densities") {
    MixtureSpec s;
    CHECK_THROWS_AS(entropy_gibbs(ThermoPoint{1.0, 1.0, {0.0, 1.0}}, s), DomainError);
    CHECK_THROWS_AS(entropy_gibbs(ThermoPoint{1.0, -1.0, {0.5, 0.5}}, s), DomainError);
}

TEST_CASE("production rates at symmetric and skewed compositions") {
    MixtureSpec s;
    s.c_v = {2.0, 2.0};
    s.B_omega = 1e6;
    const std::vector<double> eq{0.5, 0.5};
    const auto w0 = production_rates(1.0, eq, s);
    CHECK(w0[0] == 0.0);
    CHECK(w0[1] == 0.0);
    const std::vector<double> sk{0.25, 0.75};
    const auto w = production_rates(1.0, sk, s);
    CHECK(w[0] == doctest::Approx(-0.5 * std::log(1.0 / 3.0)).epsilon(1e-12));
    CHECK(w[1] == -w[0]);
}

TEST_CASE("production rates are clamped by a common scale") {
    MixtureSpec s;
    s.n = 3;
    s.c_v = {1.0, 2.0, 3.0};
    s.B_omega = 0.5;
    s.Lambda = 2.0;
    const std::vector<double> Y{1e-12, 0.5, 0.5 - 1e-12};
    const auto w = production_rates(3.0, Y, s);
    const auto ref = oracle::rates(1.0, 3.0, Y, s);
    double mx = 0.0;
    for (int k = 0; k < 3; ++k) {
        mx = std::max(mx, std::abs(w[k]));
        CHECK(w[k] == doctest::Approx(static_cast<double>(ref[k])).epsilon(1e-10));
    }
    CHECK(mx <= s.Lambda * s.B_omega * (1 + 1e-14));
}

TEST_CASE("dual-number rates carry the exact derivative") {
    MixtureSpec s;
    const double th = 1.3;
    std::vector<double> Y{0.3, 0.7};
    Dual Yd[2] = {Dual(0.3, 1.0), Dual(0.7, 0.0)}, wd[2];
    production_rates(Dual(th, 0.0), Yd, wd, s);
    const double h = 1e-6;
    std::vector<double> Yp{0.3 + h, 0.7}, Ym{0.3 - h, 0.7};
    const double fd = (production_rates(th, Yp, s)[0] - production_rates(th, Ym, s)[0]) / (2 * h);
    CHECK(wd[0].d == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("Fick fluxes sum to -D grad(sum Y)") {
    MixtureSpec s;
    s.n = 3;
    s.c_v = {1.0, 1.5, 2.0};
    ThermoPoint pt{2.0, 1.5, {0.2, 0.3, 0.5}};
    FluxInputs in;
    in.grad_theta = {0.3, -0.1};
    in.grad_Y = {{0.1, 0.2}, {-0.4, 0.05}, {0.25, -0.3}};
    in.D_lambda = 1.7;
    in.eps = 1e-3;
    in.delta = 0.1;
    const auto f = fluxes(pt, in, s);
    const double D = transport_coefficients(pt, s).D;
    for (int c = 0; c < 2; ++c) {
        double sum = 0, gsum = 0;
        for (int k = 0; k < 3; ++k) {
            sum += f.F[k][c];
            gsum += in.grad_Y[k][c];
        }
        CHECK(sum == doctest::Approx(-D * gsum).epsilon(1e-14));
    }
    CHECK(f.q[0] == doctest::Approx(-transport_coefficients(pt, s).kappa * 0.3));
    const double j0 = -(1.7 + (1e-3 + 0.1 * 0.2) / 0.2) * 0.1;
    CHECK(f.J[0][0] == doctest::Approx(j0));
}

TEST_CASE("transport coefficients and the lambda blend") {
    MixtureSpec s;
    s.kappa0 = 2.0;
    s.D0 = 3.0;
    s.L0 = 0.5;
    ThermoPoint pt{4.0, 2.0, {0.5, 0.5}};
    const auto t = transport_coefficients(pt, s);
    CHECK(t.kappa == doctest::Approx(2.0 * 4.0 * 9.0));
    CHECK(t.D == doctest::Approx(12.0));
    CHECK(t.L == doctest::Approx(0.5 * 4.0 * 9.0));
    const auto b0 = blended_coefficients(pt, 10.0, 0.0, s);
    CHECK(b0.D == doctest::Approx(30.0));
    const auto b1 = blended_coefficients(pt, 10.0, 1.0, s);
    CHECK(b1.kappa == doctest::Approx(t.kappa));
    CHECK_THROWS_AS(blended_coefficients(pt, 10.0, 1.5, s), DomainError);
}

TEST_CASE("viscous stress is symmetric") {
    const Tensor2 gu{{{1.0, 2.0}, {-3.0, 0.5}}};
    const Tensor2 S = viscous_stress(2.0, gu);
    CHECK(S[0][1] == S[1][0]);
    CHECK(S[0][0] == doctest::Approx(4.0));
    CHECK(S[0][1] == doctest::Approx(-2.0));
}

TEST_CASE("cap function") {
    CHECK(cap_function(3.0, 10.0) == 1.0);
    CHECK(cap_function(25.0, 10.0) == 2.5);
}

TEST_CASE("spec validation lists every violation") {
    MixtureSpec s;
    s.gamma = 0.5;
    s.D0 = -1.0;
    s.c_v = {1.0};
    try {
        s.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.violations().size() == 3);
        CHECK(e.violations()[0].field == "gamma");
        CHECK(e.violations()[0].constraint == "> 1 required");
    }
}

TEST_CASE("randomized Gibbs identities against a long-double oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    MixtureSpec s;
    s.n = 4;
    s.c_v = {1.5, 2.5, 0.7, 3.1};
    for (int t = 0; t < 2000; ++t) {
        const double rho = std::exp(8 * U(rng) - 4), th = std::exp(4 * U(rng) - 2);
        std::vector<double> Y(4);
        double sum = 0;
        for (auto& y : Y) sum += (y = 1e-6 + U(rng));
        for (auto& y : Y) y /= sum;
        const auto g = entropy_gibbs(ThermoPoint{rho, th, Y}, s);
        const auto ref = oracle::gibbs(rho, th, Y, s);
        for (int k = 0; k < 4; ++k)
            CHECK(g.g_k[k] == doctest::Approx(static_cast<double>(ref[k])).epsilon(1e-12).scale(th));
    }
}

}
