#include "threshold_lab/threshold.hpp"

#include <cmath>
#include <limits>

#include "threshold_lab/quadrature.hpp"

namespace tlab {

std::optional<double> point_interaction_eigenvalue(const PointInteraction& pi) {
    if (pi.kappa == 0.0)
        throw Error("point interaction requires kappa != 0");
    if (!(pi.kappa * pi.beta < 0.0))
        return std::nullopt; // omega = -kappa beta/(kappa^2+1) would not be positive
    const double omega = -pi.kappa * pi.beta / (pi.kappa * pi.kappa + 1.0);
    return -omega * omega;
}

std::string case_name(ThresholdCase c) {
    switch (c) {
    case ThresholdCase::T1FiniteAlpha:
        return "t1:alpha-finite";
    case ThresholdCase::T1AlphaInfinite:
        return "t1:alpha-infinite";
    case ThresholdCase::T1AlphaZero:
        return "t1:alpha-zero";
    case ThresholdCase::T2:
        return "t2";
    case ThresholdCase::T3:
        return "t3";
    case ThresholdCase::T4:
        return "t4";
    }
    return "?";
}

double ThresholdPrediction::rate_scale(double lambda) const {
    switch (which) {
    case ThresholdCase::T1FiniteAlpha:
    case ThresholdCase::T1AlphaInfinite:
    case ThresholdCase::T1AlphaZero:
        return lambda;
    case ThresholdCase::T2:
        return lambda * std::abs(eps ? eps->at(lambda) : 0.0);
    case ThresholdCase::T3:
        return lambda / family.alpha_at(lambda);
    case ThresholdCase::T4:
        return lambda * family.alpha_at(lambda);
    }
    return lambda;
}

double ThresholdPrediction::omega_at(double lambda) const {
    return rate_scale(lambda) * std::abs(k);
}

double ThresholdPrediction::predicted_e(double lambda) const {
    const double w = omega_at(lambda);
    return -w * w;
}

namespace {

constexpr double kEqualityTol = 1e-9; // scaled by the integrand's L1 norm

// Strict inequalities in the theorems hold or fail at O(1) scale; a value
// indistinguishable from zero (relative to the integrand's L1 mass) must not
// count as "negative".
bool strictly_negative(double value, double l1_scale) {
    return value < -kEqualityTol * std::max(1.0, l1_scale);
}

// int V(origin + alpha(x - origin)) u(x)^2 dx and the L1 norm of the integrand
struct WeightedIntegral {
    double value;
    double l1;
};

std::vector<double> mapped_breaks(const PiecewisePotential& v, const PiecewisePotential& u_pot,
                                  double alpha, double origin) {
    std::vector<double> cuts = u_pot.breakpoints();
    for (double c : v.breakpoints())
        cuts.push_back(origin + (c - origin) / alpha);
    return cuts;
}

WeightedIntegral integral_v_u2(const PiecewisePotential& v, const HalfBoundState& h,
                               const PiecewisePotential& u_pot, double alpha, double origin) {
    const double lo = origin + (-v.b() - origin) / alpha;
    const double hi = origin + (v.b() - origin) / alpha;
    auto f = [&](double x) {
        const double uu = h.u(x);
        return v(origin + alpha * (x - origin)) * uu * uu;
    };
    const auto cuts = mapped_breaks(v, u_pot, alpha, origin);
    const double value = integrate(f, lo, hi, cuts, 1e-11);
    const double l1 = integrate([&f](double x) { return std::abs(f(x)); }, lo, hi, cuts, 1e-8);
    return {value, l1};
}

double halfline_combination(const PiecewisePotential& v, double theta, double origin) {
    // int_{x<origin} V + theta^2 int_{x>origin} V, exactly per piece
    double neg = 0.0, pos = 0.0;
    for (const auto& piece : v.pieces()) {
        neg += piece.moment(0, -std::numeric_limits<double>::max(), origin);
        pos += piece.moment(0, origin, std::numeric_limits<double>::max());
    }
    return neg + theta * theta * pos;
}

double halfline_l1(const PiecewisePotential& v, double theta, double origin) {
    auto f = [&v](double x) { return std::abs(v(x)); };
    const double neg = integrate(f, -v.b(), origin, v.breakpoints(), 1e-8);
    const double pos = integrate(f, origin, v.b(), v.breakpoints(), 1e-8);
    return neg + theta * theta * pos;
}

Condition rate_exponent_condition(const char* name, const ScalingFamily& f, double lo,
                                  double hi) {
    // Rate constraints are certified symbolically on power families only.
    if (auto p = f.exponent())
        return {name, *p, *p > lo && *p < hi};
    if (f.kind() == ScalingFamily::Kind::Const && lo < 0.0 && hi > 0.0)
        return {name, 0.0, true};
    // tables cannot certify a limit statement
    return {name, std::numeric_limits<double>::quiet_NaN(), false};
}

void finalize(ThresholdPrediction& p) {
    p.conditions_ok = true;
    for (const auto& c : p.conditions)
        p.conditions_ok = p.conditions_ok && c.satisfied;
}

} // namespace

ThresholdPrediction predict_order2(const PiecewisePotential& u_pot, const PiecewisePotential& v,
                                   const ScalingFamily& f, const HalfBoundState& h,
                                   double origin) {
    ThresholdPrediction p;
    p.family = f;
    p.theta = h.theta();
    const double d = h.theta() * h.theta() + 1.0;

    switch (f.limit_class()) {
    case LimitClass::FinitePositive: {
        p.which = ThresholdCase::T1FiniteAlpha;
        p.rate = "omega = lambda |k|";
        const double alpha = f.limit();
        const auto I = integral_v_u2(v, h, u_pot, alpha, origin);
        p.k = alpha / d * I.value;
        p.conditions.push_back(
            {"int_V_alpha_u2_negative", I.value, strictly_negative(I.value, I.l1)});
        break;
    }
    case LimitClass::Infinite: {
        p.which = ThresholdCase::T1AlphaInfinite;
        p.rate = "omega = lambda |k|";
        const double u0 = h.u(origin);
        const double iv = moment(v, 0, MomentRegion::Full);
        p.k = u0 * u0 / d * iv;
        p.conditions.push_back(
            {"u0_nonzero", u0, std::abs(u0) > 1e-12 * std::max(1.0, std::abs(h.theta()))});
        const double l1 = integrate([&v](double x) { return std::abs(v(x)); }, -v.b(), v.b(),
                                    v.breakpoints(), 1e-8);
        p.conditions.push_back({"int_V_negative", iv, strictly_negative(iv, l1)});
        break;
    }
    case LimitClass::Zero: {
        p.which = ThresholdCase::T1AlphaZero;
        p.rate = "omega = lambda |k|";
        const double hc = halfline_combination(v, h.theta(), origin);
        p.k = hc / d;
        p.conditions.push_back({"halfline_moment_negative", hc,
                                strictly_negative(hc, halfline_l1(v, h.theta(), origin))});
        break;
    }
    }
    finalize(p);
    return p;
}

ThresholdPrediction predict_t2(const PiecewisePotential& u_pot, const PiecewisePotential& v,
                               const ScalingFamily& f, const HalfBoundState& h,
                               std::optional<PowerLaw> eps, double origin) {
    if (f.limit_class() != LimitClass::FinitePositive)
        throw Error("predict_t2: scaling family must have a finite positive limit");
    if (!eps)
        eps = f.epsilon();
    if (!eps)
        throw Error("predict_t2: an epsilon family (alpha_lambda - alpha) is required");
    if (eps->c == 0.0)
        throw Error("predict_t2: epsilon family must be nonzero");

    const PiecewisePotential vprime = derivative(v); // throws NotW12 when inapplicable
    const double alpha = f.limit();
    const double d = h.theta() * h.theta() + 1.0;

    ThresholdPrediction p;
    p.family = f;
    p.eps = eps;
    p.theta = h.theta();
    p.which = ThresholdCase::T2;
    p.rate = "omega = lambda |eps_lambda| |k|";

    const auto I0 = integral_v_u2(v, h, u_pot, alpha, origin);
    // int (x - origin) V'(origin + alpha(x-origin)) u^2 dx
    const double lo = origin + (-v.b() - origin) / alpha;
    const double hi = origin + (v.b() - origin) / alpha;
    auto g = [&](double x) {
        const double uu = h.u(x);
        return (x - origin) * vprime(origin + alpha * (x - origin)) * uu * uu;
    };
    const auto cuts = mapped_breaks(v, u_pot, alpha, origin);
    const double I1 = integrate(g, lo, hi, cuts, 1e-11);
    const double I1_l1 =
        integrate([&g](double x) { return std::abs(g(x)); }, lo, hi, cuts, 1e-8);
    p.k = -alpha / d * I1;

    p.conditions.push_back(
        {"int_V_alpha_u2_zero", I0.value, std::abs(I0.value) <= kEqualityTol * std::max(1.0, I0.l1)});
    p.conditions.push_back(
        {"int_xVprime_alpha_u2_negative", I1, strictly_negative(I1, I1_l1)});
    p.conditions.push_back(
        {"eps_exponent_in_(0,1/3)", eps->p, eps->p > 0.0 && eps->p < 1.0 / 3.0});
    finalize(p);
    return p;
}

ThresholdPrediction predict_t3(const PiecewisePotential& u_pot, const PiecewisePotential& v,
                               const ScalingFamily& f, const HalfBoundState& h, double origin) {
    (void)u_pot;
    if (f.limit_class() != LimitClass::Infinite)
        throw Error("predict_t3: scaling family must diverge (alpha_lambda -> infinity)");
    const double d = h.theta() * h.theta() + 1.0;

    ThresholdPrediction p;
    p.family = f;
    p.theta = h.theta();
    p.which = ThresholdCase::T3;
    p.rate = "omega = (lambda/alpha_lambda) |k|";

    const double iv = moment(v, 0, MomentRegion::Full);
    const double ixv = moment(v, 1, MomentRegion::Full) - origin * iv;
    const double u0 = h.u(origin);
    const double du0 = h.du(origin);
    p.k = -2.0 * u0 * du0 / d * ixv;

    const double l1 = integrate([&v](double x) { return std::abs(v(x)); }, -v.b(), v.b(),
                                v.breakpoints(), 1e-8);
    p.conditions.push_back({"int_V_zero", iv, std::abs(iv) <= kEqualityTol * std::max(1.0, l1)});
    const double xl1 = integrate([&v](double x) { return std::abs(x * v(x)); }, -v.b(), v.b(),
                                 v.breakpoints(), 1e-8);
    const double sign_term = u0 * du0 * ixv;
    p.conditions.push_back({"u0_du0_int_xV_negative", sign_term,
                            strictly_negative(sign_term, std::abs(u0 * du0) * xl1)});
    p.conditions.push_back(rate_exponent_condition("alpha_exponent_in_(-1/3,0)", f, -1.0 / 3.0, 0.0));
    finalize(p);
    return p;
}

ThresholdPrediction predict_t4(const PiecewisePotential& u_pot, const PiecewisePotential& v,
                               const ScalingFamily& f, const HalfBoundState& h, double origin) {
    if (f.limit_class() != LimitClass::Zero)
        throw Error("predict_t4: scaling family must vanish (alpha_lambda -> 0)");

    const double v_left = v.limit_from_left(origin);
    const double v_right = v.limit_from_right(origin);
    if (std::abs(v_left - v_right) >
        1e-9 * std::max({1.0, std::abs(v_left), std::abs(v_right)}))
        throw DiscontinuousAtZero("predict_t4: V is discontinuous at the origin");
    const double v0 = 0.5 * (v_left + v_right);

    const double theta = h.theta();
    const double d = theta * theta + 1.0;

    ThresholdPrediction p;
    p.family = f;
    p.theta = theta;
    p.which = ThresholdCase::T4;
    p.rate = "omega = lambda alpha_lambda |k|";

    // int (u^2 - Theta^2) dx; the integrand vanishes outside [-b_U, b_U]
    const double bu = h.b();
    auto g = [&](double x) {
        const double uu = h.u(x);
        const double th = x <= origin ? 1.0 : theta; // Theta(origin) pinned to 1
        return uu * uu - th * th;
    };
    std::vector<double> cuts = u_pot.breakpoints();
    cuts.push_back(origin);
    const double itheta = integrate(g, -bu, bu, cuts, 1e-11);
    p.k = -v0 / d * itheta;

    const double hc = halfline_combination(v, theta, origin);
    p.conditions.push_back({"halfline_moment_zero", hc,
                            std::abs(hc) <= kEqualityTol * std::max(1.0, halfline_l1(v, theta, origin))});
    const double itheta_l1 =
        integrate([&g](double x) { return std::abs(g(x)); }, -bu, bu, cuts, 1e-8);
    const double sign_term = v0 * itheta;
    p.conditions.push_back({"V0_int_u2_minus_Theta2_negative", sign_term,
                            strictly_negative(sign_term, std::abs(v0) * itheta_l1)});
    p.conditions.push_back(rate_exponent_condition("alpha_exponent_in_(0,1/4)", f, 0.0, 0.25));
    finalize(p);
    return p;
}

} // namespace tlab
