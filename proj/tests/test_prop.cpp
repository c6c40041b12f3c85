#include <doctest.h>

#include <cmath>
#include <random>

#include "threshold_lab/ode.hpp"
#include "threshold_lab/quadrature.hpp"
#include "test_support.hpp"

using namespace tlab;
using namespace tlab::testing;

TEST_CASE("propagate: exact exponential, cosine, and constant solutions") {
    const PiecewisePotential zero({}, 6.0);
    const OdeState exp_end = propagate(zero, -1.0, {0.0, 1.0, 1.0}, 1.0);
    CHECK(exp_end.y == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
    CHECK(exp_end.dy == doctest::Approx(std::exp(1.0)).epsilon(1e-13));

    const auto well = resonant_well();
    const OdeState cos_end = propagate(well, 0.0, {0.0, 1.0, 0.0}, 1.0);
    CHECK(cos_end.y == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(cos_end.dy) <= 1e-10);

    const OdeState flat = propagate(zero, 0.0, {0.0, 1.0, 0.0}, 5.0);
    CHECK(flat.y == 1.0);
    CHECK(flat.dy == 0.0);
}

TEST_CASE("property: transfer preserves the Wronskian (determinant 1)") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        const auto q = random_potential(rng);
        const double E = -4.0 + 8.0 * unif(rng);
        const double b = q.b();
        const double x = -b + 2.0 * b * unif(rng);
        const OdeState a = propagate(q, E, {-b, 1.0, 0.0}, x);
        const OdeState c = propagate(q, E, {-b, 0.0, 1.0}, x);
        const double det = a.y * c.dy - a.dy * c.y;
        CHECK(det == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("property: constant energy-potential shift is a gauge transformation") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 15; ++trial) {
        const auto q = random_potential(rng);
        const double b = q.b();
        const double E = -2.0 + 4.0 * unif(rng);
        const double c = -3.0 + 6.0 * unif(rng);
        // Q + c as a merged potential covering [-b, b]
        const auto shifted = combined(q, square_well(-b, b, c, b));
        const double to = -b + 2.0 * b * unif(rng);
        const OdeState s1 = propagate(q, E, {-b, 0.7, -0.4}, to);
        const OdeState s2 = propagate(shifted, E + c, {-b, 0.7, -0.4}, to);
        CHECK(s1.y == doctest::Approx(s2.y).epsilon(1e-9).scale(1.0));
        CHECK(s1.dy == doctest::Approx(s2.dy).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("solve_inhomogeneous: double integration and linear solutions") {
    const PiecewisePotential zero({}, 1.0);
    const InhomogeneousSolution v(zero, [](double) { return 1.0; }, {-1.0, 0.0, 0.0}, 1.0);
    for (double x : {-0.5, 0.0, 0.7, 1.0}) {
        // -v'' = 1 with zero Cauchy data at -1: v = -(x+1)^2/2
        CHECK(v.value(x) == doctest::Approx(-0.5 * (x + 1.0) * (x + 1.0)).epsilon(1e-11));
        CHECK(v.deriv(x) == doctest::Approx(-(x + 1.0)).epsilon(1e-11));
    }

    const InhomogeneousSolution lin(zero, [](double) { return 0.0; }, {-1.0, 0.0, 2.5}, 1.0);
    for (double x : {-0.4, 0.3, 1.0})
        CHECK(lin.value(x) == doctest::Approx(2.5 * (x + 1.0)).epsilon(1e-12));
}

TEST_CASE("solve_inhomogeneous: integration-by-parts identity theta v'(b) = int V0 u^2") {
    // U resonant well on (0,1), u = cos(pi x) inside, theta = -1;
    // f = -V0 u with V0 the unit-depth box gives theta v'(b) = int V0 u^2 = -3/4.
    const auto u_pot = resonant_well();
    const auto v0 = square_well(-0.5, 0.5, -1.0, 1.0);
    const double b = u_pot.b();
    auto u = [](double x) {
        if (x <= 0.0)
            return 1.0;
        if (x >= 1.0)
            return -1.0;
        return std::cos(M_PI * x);
    };
    auto f = [&](double x) { return -v0(x) * u(x); };
    const InhomogeneousSolution v(u_pot, f, {-b, 0.0, 0.0}, b, v0.breakpoints());
    const double theta = -1.0;
    CHECK(theta * v.deriv(b) == doctest::Approx(-0.75).epsilon(1e-9));
}

TEST_CASE("property: inhomogeneous solutions satisfy their ODE pointwise") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double h = 1e-5;
    for (int trial = 0; trial < 5; ++trial) {
        const auto u_pot = random_potential(rng, /*smooth_edges=*/true);
        const double b = u_pot.b();
        auto f = [](double x) { return std::sin(1.7 * x) + 0.3 * x; };
        const InhomogeneousSolution v(u_pot, f, {-b, 0.4, -0.2}, b);
        for (int i = 0; i < 20; ++i) {
            const double x = -b + 4.0 * h + (2.0 * b - 8.0 * h) * unif(rng);
            const double vpp = (v.deriv(x + h) - v.deriv(x - h)) / (2.0 * h);
            const double residual = -vpp + evaluate(u_pot, x) * v.value(x) - f(x);
            CHECK(std::abs(residual) <= 2e-8 * std::max(1.0, std::abs(vpp)));
        }
    }
}

TEST_CASE("fundamental pair: Wronskian is 1 across the domain") {
    const auto u_pot = shifted_well();
    const auto pair = FundamentalPair::build(u_pot, -u_pot.b(), u_pot.b());
    for (double x : {-0.9, -0.25, 0.1, 0.5, 0.75, 0.97})
        CHECK(pair.wronskian_at(x) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("l2_norm: unit box, exponential tail, half sine") {
    CHECK(l2_norm([](double) { return 1.0; }, 0.0, 1.0) == doctest::Approx(1.0));
    const double omega = 2.0;
    CHECK(l2_norm([omega](double x) { return std::exp(omega * x); }, -25.0, 0.0) ==
          doctest::Approx(0.5).epsilon(1e-10)); // sqrt(1/(2 omega)) = 1/2
    CHECK(l2_norm([](double x) { return std::sin(M_PI * x); }, 0.0, 1.0) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
}
