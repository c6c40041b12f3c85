#include <doctest.h>

#include <cmath>

#include "threshold_lab/quadrature.hpp"
#include "threshold_lab/spectrum.hpp"
#include "test_support.hpp"

using namespace tlab;
using namespace tlab::testing;

namespace {

// Independent oracle: even bound state of the centered square well of depth s,
// half-width a, from the textbook transcendental equation q tan(q a) = omega.
double square_well_omega(double depth, double halfwidth) {
    auto g = [&](double omega) {
        const double q = std::sqrt(depth - omega * omega);
        return q * std::tan(q * halfwidth) - omega;
    };
    double lo = 1e-12;
    double hi = std::min(std::sqrt(depth) * (1.0 - 1e-12), 0.999 * M_PI_2 / halfwidth);
    return bisect_root(g, lo, hi, 1e-14);
}

} // namespace

TEST_CASE("mismatch: free line value and square-well sign change") {
    const PiecewisePotential zero({}, 1.0);
    CHECK(mismatch(zero, 1.0) == doctest::Approx(2.0 * std::exp(2.0)).epsilon(1e-12));

    const auto q = square_well(-0.5, 0.5, -2.0, 1.0);
    const double w_star = square_well_omega(2.0, 0.5);
    CHECK(mismatch(q, w_star * (1.0 - 1e-4)) * mismatch(q, w_star * (1.0 + 1e-4)) < 0.0);
}

TEST_CASE("mismatch: resonant potential at lambda = 0 vanishes as omega -> 0") {
    const auto u = resonant_well();
    CHECK(std::abs(mismatch(u, 1e-7)) < 1e-5);
    CHECK(std::abs(mismatch(u, 1e-4)) < 1e-2);
}

TEST_CASE("find_negative_eigenvalues: empty spectrum and square-well oracle") {
    const PiecewisePotential zero({}, 1.0);
    CHECK(find_negative_eigenvalues(zero).eigenvalues.empty());

    const auto q = square_well(-0.5, 0.5, -1.0, 1.0);
    const auto result = find_negative_eigenvalues(q);
    REQUIRE(result.eigenvalues.size() == 1);
    const double w_star = square_well_omega(1.0, 0.5);
    CHECK(result.eigenvalues[0] == doctest::Approx(-w_star * w_star).epsilon(1e-9));
    CHECK(result.omegas[0] == doctest::Approx(w_star).epsilon(1e-9));
    CHECK(result.residuals[0] < 1e-10);
}

TEST_CASE("find_negative_eigenvalues: near-threshold state of the perturbed resonant well") {
    // Theorem 1(i) constant for this pair is k = -3/8; at lambda = 1e-3 the
    // smallest-|E| eigenvalue is within 10% of -(3 lambda/8)^2.
    const double lambda = 1e-3;
    const auto q = combined(resonant_well(), square_well(-0.5, 0.5, -lambda, 1.0));
    const auto result = find_negative_eigenvalues(q);
    REQUIRE(result.eigenvalues.size() >= 1);
    const double e_small = result.eigenvalues.back(); // closest to 0
    const double predicted = -(lambda * 0.375) * (lambda * 0.375);
    CHECK(e_small / predicted == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("threshold_eigenvalue: corollary rate, absence for positive V") {
    // U = 0, V = -box: e ~ -lambda^2/4
    ScaledProblem corollary{PiecewisePotential({}, 0.75), square_well(-0.5, 0.5, -1.0, 0.75),
                            ScalingFamily::constant(1.0), 1e-2};
    const auto e = threshold_eigenvalue(corollary);
    REQUIRE(e.has_value());
    CHECK(*e / (-2.5e-5) == doctest::Approx(1.0).epsilon(0.05));

    ScaledProblem positive{PiecewisePotential({}, 0.75), square_well(-0.5, 0.5, 1.0, 0.75),
                           ScalingFamily::constant(1.0), 1e-2};
    CHECK_FALSE(threshold_eigenvalue(positive).has_value());

    // resonant U with a shrinking-support perturbation (alpha = lambda^{-1/4});
    // Theorem 1(ii) gives k = -1/2 so e ~ -lambda^2/4
    ScaledProblem t1ii{resonant_well(), square_well(-0.5, 0.5, -1.0, 0.75),
                       ScalingFamily::power(1.0, -0.25), 1e-4};
    const auto e2 = threshold_eigenvalue(t1ii);
    REQUIRE(e2.has_value());
    CHECK(*e2 / (-0.25e-8) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("property: reconstructed eigenfunction satisfies the ODE and decays") {
    const auto q = square_well(-0.5, 0.5, -1.0, 1.0);
    const auto result = find_negative_eigenvalues(q);
    REQUIRE(result.eigenvalues.size() == 1);
    const double E = result.eigenvalues[0];
    const double omega = result.omegas[0];
    const double b = q.b();
    const Solution psi = Solution::integrate(q, E, {-b, 1.0, omega}, b);
    const double h = 1e-5;
    for (double x : {-0.7, -0.3, -0.1, 0.2, 0.45, 0.8}) {
        const double ypp = (psi.at(x + h).dy - psi.at(x - h).dy) / (2.0 * h);
        const double residual = -ypp + (evaluate(q, x) - E) * psi.at(x).y;
        CHECK(std::abs(residual) <= 1e-7);
    }
    // right tail decays: the defect y'(B) + omega y(B) is tiny relative to y(B)
    const OdeState end = psi.back();
    CHECK(std::abs(end.dy + omega * end.y) <= 1e-9 * std::abs(end.y));
}

TEST_CASE("property: eigenvalues are translation invariant") {
    const auto q = square_well(-0.5, 0.5, -1.0, 1.0);
    const auto moved = translated(q, 0.3);
    const double e0 = find_negative_eigenvalues(q).eigenvalues.at(0);
    const double e1 = find_negative_eigenvalues(moved).eigenvalues.at(0);
    CHECK(e0 == doctest::Approx(e1).epsilon(1e-10));
}

TEST_CASE("property: deepening a well lowers its eigenvalue") {
    const double e_shallow =
        find_negative_eigenvalues(square_well(-0.5, 0.5, -1.0, 1.0)).eigenvalues.at(0);
    const double e_deep =
        find_negative_eigenvalues(square_well(-0.5, 0.5, -1.3, 1.0)).eigenvalues.at(0);
    CHECK(e_deep < e_shallow);
}

TEST_CASE("find_negative_eigenvalues: deep well with even and odd bound states") {
    // depth 20 half-width 1/2 supports exactly two states; oracle from the
    // even (q tan(qa) = omega) and odd (-q cot(qa) = omega) branch equations
    const double depth = 20.0;
    const double a = 0.5;
    auto even = [&](double omega) {
        const double q = std::sqrt(depth - omega * omega);
        return q * std::tan(q * a) - omega;
    };
    auto odd = [&](double omega) {
        const double q = std::sqrt(depth - omega * omega);
        return -q / std::tan(q * a) - omega;
    };
    // even branch: qa in (0, pi/2); odd branch: qa in (pi/2, pi)
    const double s = std::sqrt(depth);
    const double w_even = bisect_root(even, std::sqrt(depth - std::pow(0.9999 * M_PI_2 / a, 2)),
                                      s * (1.0 - 1e-12), 1e-14);
    const double w_odd_hi = std::sqrt(depth - std::pow(1.0001 * M_PI_2 / a, 2));
    const double w_odd = bisect_root(odd, 1e-8, w_odd_hi, 1e-14);

    const auto result = find_negative_eigenvalues(square_well(-a, a, -depth, 1.0));
    REQUIRE(result.eigenvalues.size() == 2);
    CHECK(result.omegas[0] == doctest::Approx(w_even).epsilon(1e-9));
    CHECK(result.omegas[1] == doctest::Approx(w_odd).epsilon(1e-9));
    CHECK(result.eigenvalues[0] < result.eigenvalues[1]);
}
