#include <doctest.h>

#include <cmath>
#include <random>

#include "threshold_lab/quadrature.hpp"
#include "threshold_lab/threshold.hpp"
#include "test_support.hpp"

using namespace tlab;
using namespace tlab::testing;

namespace {

HalfBoundState resonant_state(const PiecewisePotential& u) {
    const auto res = detect_resonance(u);
    REQUIRE(res.resonant);
    return *res.state;
}

} // namespace

TEST_CASE("point interaction: closed-form eigenvalue") {
    CHECK(*point_interaction_eigenvalue({1.0, -2.0}) == doctest::Approx(-1.0));
    CHECK_FALSE(point_interaction_eigenvalue({1.0, 2.0}).has_value());
    CHECK_FALSE(point_interaction_eigenvalue({-1.0, -2.0}).has_value());
}

TEST_CASE("property: point-interaction eigenfunction satisfies the coupling conditions") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> unif(-5.0, 5.0);
    int done = 0;
    while (done < 1000) {
        const double kappa = unif(rng);
        const double beta = unif(rng);
        if (std::abs(kappa) < 1e-3)
            continue;
        if (kappa * beta >= 0.0) {
            CHECK_FALSE(point_interaction_eigenvalue({kappa, beta}).has_value());
            continue;
        }
        const auto e = point_interaction_eigenvalue({kappa, beta});
        REQUIRE(e.has_value());
        const double omega = -kappa * beta / (kappa * kappa + 1.0);
        CHECK(*e == doctest::Approx(-omega * omega).epsilon(1e-14));
        // phi = e^{omega x} (x<0), kappa e^{-omega x} (x>0):
        // value condition phi(+0) = kappa phi(-0) holds identically;
        // derivative condition phi'(+0) = beta phi(-0) + kappa^{-1} phi'(-0):
        const double lhs = -kappa * omega;
        const double rhs = beta + omega / kappa;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
        ++done;
    }
}

TEST_CASE("predict_order2: corollary and resonant-well constants") {
    const PiecewisePotential u_zero({}, 0.75);
    const auto h_zero = resonant_state(u_zero);
    const auto v_box = square_well(-0.5, 0.5, -1.0, 0.75);

    const auto corollary = predict_order2(u_zero, v_box, ScalingFamily::constant(1.0), h_zero);
    CHECK(corollary.which == ThresholdCase::T1FiniteAlpha);
    CHECK(corollary.k == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(corollary.conditions_ok);
    CHECK(corollary.predicted_e(1e-2) == doctest::Approx(-2.5e-5).epsilon(1e-10));

    const auto u_res = resonant_well();
    const auto h_res = resonant_state(u_res);
    const auto t1i = predict_order2(u_res, v_box, ScalingFamily::constant(1.0), h_res);
    CHECK(t1i.k == doctest::Approx(-0.375).epsilon(1e-9)); // (1/2) int V u^2 = -3/8
    CHECK(t1i.conditions_ok);

    const auto t1ii = predict_order2(u_res, v_box, ScalingFamily::power(1.0, -0.25), h_res);
    CHECK(t1ii.which == ThresholdCase::T1AlphaInfinite);
    CHECK(t1ii.k == doctest::Approx(-0.5).epsilon(1e-9)); // u(0)^2/2 * int V
    CHECK(t1ii.conditions_ok);

    const auto t1iii = predict_order2(u_res, v_box, ScalingFamily::power(1.0, 0.25), h_res);
    CHECK(t1iii.which == ThresholdCase::T1AlphaZero);
    CHECK(t1iii.k == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(t1iii.conditions_ok);
}

TEST_CASE("predict_order2: all scaling classes agree for trivial U (corollary)") {
    const PiecewisePotential u_zero({}, 0.75);
    const auto h = resonant_state(u_zero);
    const auto v = square_well(-0.5, 0.5, -1.0, 0.75);
    for (const auto& f : {ScalingFamily::constant(2.0), ScalingFamily::power(1.0, -0.25),
                          ScalingFamily::power(1.0, 0.25)}) {
        const auto p = predict_order2(u_zero, v, f, h);
        CHECK(p.k == doctest::Approx(-0.5).epsilon(1e-10));
        CHECK(p.conditions_ok);
    }
}

TEST_CASE("predict_t2: worked trigonometric family") {
    const auto u = resonant_well(1.25);
    const auto h = resonant_state(u);
    const auto f = ScalingFamily::const_plus_power(1.0, 1.0, 0.25);

    const auto p = predict_t2(u, t2_potential(), f, h);
    CHECK(p.k == doctest::Approx(1.0 / 48.0).epsilon(1e-8));
    CHECK(p.conditions_ok);
    CHECK(p.rate_scale(1e-4) == doctest::Approx(1e-4 * 0.1).epsilon(1e-12));

    // negated V flips the strict inequality
    const auto negated = predict_t2(u, scaled_by(t2_potential(), -1.0), f, h);
    CHECK_FALSE(negated.conditions_ok);
    CHECK(negated.k == doctest::Approx(-1.0 / 48.0).epsilon(1e-8));

    // a discontinuous V has no derivative in W^1_2
    CHECK_THROWS_AS(predict_t2(u, square_well(-0.5, 0.5, -1.0, 0.75), f, h), NotW12);
}

TEST_CASE("predict_t3: shifted well with a linear ramp") {
    const auto u = shifted_well();
    const auto h = resonant_state(u);
    const auto f = ScalingFamily::power(1.0, -0.25);

    const auto p = predict_t3(u, ramp_potential(), f, h);
    CHECK(p.k == doctest::Approx(M_PI / 3.0).epsilon(1e-10));
    CHECK(p.conditions_ok);

    const auto flipped = predict_t3(u, scaled_by(ramp_potential(), -1.0), f, h);
    CHECK_FALSE(flipped.conditions_ok);

    // symmetric U has u'(0) = 0, forcing k = 0
    const auto u_sym = square_well(-0.5, 0.5, -4.0 * M_PI * M_PI, 1.0);
    const auto p_sym = predict_t3(u_sym, ramp_potential(), f, resonant_state(u_sym));
    CHECK(std::abs(p_sym.k) <= 1e-9);
    CHECK_FALSE(p_sym.conditions_ok);
}

TEST_CASE("predict_t4: shifted well with a cosine bump") {
    const auto u = shifted_well();
    const auto h = resonant_state(u);
    const auto f = ScalingFamily::power(1.0, 0.2);

    const auto p = predict_t4(u, cosine_potential(), f, h);
    CHECK(p.k == doctest::Approx(0.25).epsilon(1e-9)); // -(1/2) V(0) int(u^2 - Theta^2) = 1/4
    CHECK(p.conditions_ok);

    const auto flipped = predict_t4(u, scaled_by(cosine_potential(), -1.0), f, h);
    CHECK_FALSE(flipped.conditions_ok);

    // trivial U: u^2 - Theta^2 = 0 identically, so k = 0 and conditions fail
    const PiecewisePotential u_zero({}, 0.75);
    const auto p_zero = predict_t4(u_zero, cosine_potential(), f, resonant_state(u_zero));
    CHECK(std::abs(p_zero.k) <= 1e-10);
    CHECK_FALSE(p_zero.conditions_ok);
}

TEST_CASE("remark: higher-order theorems are vacuous for trivial U") {
    const PiecewisePotential u_zero({}, 1.25);
    const auto h = resonant_state(u_zero);

    // T2 with int V = 0: integrating by parts forces int xV' = -int V = 0
    PotentialPiece sine;
    sine.from = 0.0;
    sine.to = 1.0;
    sine.harmonics = {{1.0, 2.0 * M_PI, 0.0, HarmonicKind::Sin}};
    const PiecewisePotential v_sine({sine}, 1.25);
    const auto t2 = predict_t2(u_zero, v_sine, ScalingFamily::const_plus_power(1.0, 1.0, 0.25), h);
    CHECK_FALSE(t2.conditions_ok);

    const auto t3 = predict_t3(u_zero, ramp_potential(), ScalingFamily::power(1.0, -0.25), h);
    CHECK(std::abs(t3.k) <= 1e-12);
    CHECK_FALSE(t3.conditions_ok);

    const auto t4 = predict_t4(u_zero, cosine_potential(), ScalingFamily::power(1.0, 0.2), h);
    CHECK_FALSE(t4.conditions_ok);
}

TEST_CASE("property: predictions are covariant under translation") {
    const double s = 0.4;

    // T1(i) with alpha = 2: dilation recentred at the translated origin
    const auto u = resonant_well();
    const auto h = resonant_state(u);
    const auto v = square_well(-0.5, 0.5, -1.0, 0.75);
    const auto base = predict_order2(u, v, ScalingFamily::constant(2.0), h);
    const auto moved = predict_order2(translated(u, s), translated(v, s),
                                      ScalingFamily::constant(2.0),
                                      resonant_state(translated(u, s)), s);
    CHECK(moved.k == doctest::Approx(base.k).epsilon(1e-9));
    CHECK(moved.predicted_e(1e-3) == doctest::Approx(base.predicted_e(1e-3)).epsilon(1e-9));

    // T3: u(0) u'(0) markers move with the origin
    const auto u3 = shifted_well();
    const auto h3 = resonant_state(u3);
    const auto base3 = predict_t3(u3, ramp_potential(), ScalingFamily::power(1.0, -0.25), h3);
    const auto moved3 = predict_t3(translated(u3, s), translated(ramp_potential(), s),
                                   ScalingFamily::power(1.0, -0.25),
                                   resonant_state(translated(u3, s)), s);
    CHECK(moved3.k == doctest::Approx(base3.k).epsilon(1e-9));

    // T4: Theta splits at the translated origin
    const auto base4 = predict_t4(u3, cosine_potential(), ScalingFamily::power(1.0, 0.2), h3);
    const auto moved4 = predict_t4(translated(u3, s), translated(cosine_potential(), s),
                                   ScalingFamily::power(1.0, 0.2),
                                   resonant_state(translated(u3, s)), s);
    CHECK(moved4.k == doctest::Approx(base4.k).epsilon(1e-9));
}
