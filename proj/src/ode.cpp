#include "threshold_lab/ode.hpp"

#include <algorithm>
#include <cmath>

namespace tlab {

OdeState transfer_constant(const OdeState& s, double q, double E, double to_x) {
    const double h = to_x - s.x;
    const double mu = q - E;
    double C, S; // y(x0+h) = C y0 + S y0', y'(x0+h) = mu S y0 + C y0'
    if (std::abs(mu) * h * h < 1e-12) {
        // series: C = cosh(sqrt(mu) h), S = sinh(sqrt(mu) h)/sqrt(mu)
        const double z = mu * h * h;
        C = 1.0 + z / 2.0 * (1.0 + z / 12.0);
        S = h * (1.0 + z / 6.0 * (1.0 + z / 20.0));
    } else if (mu > 0.0) {
        const double r = std::sqrt(mu);
        C = std::cosh(r * h);
        S = std::sinh(r * h) / r;
    } else {
        const double k = std::sqrt(-mu);
        C = std::cos(k * h);
        S = std::sin(k * h) / k;
    }
    return {to_x, C * s.y + S * s.dy, mu * S * s.y + C * s.dy};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0,
                 A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                 A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
constexpr double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
                 B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
constexpr double E1 = 71.0 / 57600.0, E3 = -71.0 / 16695.0, E4 = 71.0 / 1920.0,
                 E5 = -17253.0 / 339200.0, E6 = 22.0 / 525.0, E7 = -1.0 / 40.0;

struct Deriv {
    double dy, ddy;
};

template <typename Rhs>
OdeState dopri5(const Rhs& rhs, OdeState s, double to_x, const PropagateOptions& opts,
                std::vector<OdeState>* trace) {
    const double span = to_x - s.x;
    if (span == 0.0)
        return s;
    const double dir = span > 0.0 ? 1.0 : -1.0;
    double h = dir * std::min(std::abs(span), 0.05);
    Deriv k1 = rhs(s.x, s.y, s.dy);
    int rejected_in_a_row = 0;

    while (dir * (to_x - s.x) > 0.0) {
        if (std::abs(h) > std::abs(to_x - s.x))
            h = to_x - s.x;
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(s.x)))
            throw StepFailure("adaptive step size underflow");

        auto stage = [&](double frac, double wy, double wdy) {
            return rhs(s.x + frac * h, s.y + h * wy, s.dy + h * wdy);
        };
        Deriv k2 = stage(0.2, A21 * k1.dy, A21 * k1.ddy);
        Deriv k3 = stage(0.3, A31 * k1.dy + A32 * k2.dy, A31 * k1.ddy + A32 * k2.ddy);
        Deriv k4 = stage(0.8, A41 * k1.dy + A42 * k2.dy + A43 * k3.dy,
                         A41 * k1.ddy + A42 * k2.ddy + A43 * k3.ddy);
        Deriv k5 = stage(8.0 / 9.0, A51 * k1.dy + A52 * k2.dy + A53 * k3.dy + A54 * k4.dy,
                         A51 * k1.ddy + A52 * k2.ddy + A53 * k3.ddy + A54 * k4.ddy);
        Deriv k6 = stage(1.0, A61 * k1.dy + A62 * k2.dy + A63 * k3.dy + A64 * k4.dy + A65 * k5.dy,
                         A61 * k1.ddy + A62 * k2.ddy + A63 * k3.ddy + A64 * k4.ddy + A65 * k5.ddy);

        const double y_new = s.y + h * (B1 * k1.dy + B3 * k3.dy + B4 * k4.dy + B5 * k5.dy +
                                        B6 * k6.dy);
        const double dy_new = s.dy + h * (B1 * k1.ddy + B3 * k3.ddy + B4 * k4.ddy + B5 * k5.ddy +
                                          B6 * k6.ddy);
        Deriv k7 = rhs(s.x + h, y_new, dy_new);

        const double err_y = h * (E1 * k1.dy + E3 * k3.dy + E4 * k4.dy + E5 * k5.dy + E6 * k6.dy +
                                  E7 * k7.dy);
        const double err_dy = h * (E1 * k1.ddy + E3 * k3.ddy + E4 * k4.ddy + E5 * k5.ddy +
                                   E6 * k6.ddy + E7 * k7.ddy);
        const double sc_y = opts.atol + opts.rtol * std::max(std::abs(s.y), std::abs(y_new));
        const double sc_dy = opts.atol + opts.rtol * std::max(std::abs(s.dy), std::abs(dy_new));
        const double err = std::sqrt(0.5 * ((err_y / sc_y) * (err_y / sc_y) +
                                            (err_dy / sc_dy) * (err_dy / sc_dy)));

        if (err <= 1.0) {
            s = {s.x + h, y_new, dy_new};
            k1 = k7; // FSAL
            if (trace)
                trace->push_back(s);
            rejected_in_a_row = 0;
        } else if (++rejected_in_a_row > 60) {
            throw StepFailure("adaptive controller kept rejecting steps");
        }
        const double factor =
            std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= factor;
    }
    return s;
}

OdeState advance(const PiecewisePotential& q, double E, OdeState s, double to_x,
                 const PropagateOptions& opts, std::vector<OdeState>* trace) {
    if (to_x == s.x)
        return s;
    const double dir = to_x > s.x ? 1.0 : -1.0;

    // split [s.x, to_x] at the potential's breakpoints
    std::vector<double> cuts;
    for (double c : q.breakpoints())
        if (dir > 0 ? (c > s.x && c < to_x) : (c < s.x && c > to_x))
            cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    if (dir < 0)
        std::reverse(cuts.begin(), cuts.end());
    cuts.push_back(to_x);

    for (double target : cuts) {
        const double lo = std::min(s.x, target);
        const double hi = std::max(s.x, target);
        double value = 0.0;
        if (q.constant_on(lo, hi, &value)) {
            s = transfer_constant(s, value, E, target);
            if (trace)
                trace->push_back(s);
        } else {
            auto rhs = [&q, E](double x, double y, double dy) {
                return Deriv{dy, (q(x) - E) * y};
            };
            s = dopri5(rhs, s, target, opts, trace);
        }
    }
    return s;
}

} // namespace

OdeState propagate(const PiecewisePotential& q, double E, OdeState from, double to_x,
                   const PropagateOptions& opts) {
    return advance(q, E, from, to_x, opts, nullptr);
}

Solution Solution::integrate(const PiecewisePotential& q, double E, OdeState init, double to_x,
                             const PropagateOptions& opts) {
    Solution sol;
    sol.q_ = q;
    sol.energy_ = E;
    sol.opts_ = opts;
    sol.nodes_.push_back(init);
    advance(q, E, init, to_x, opts, &sol.nodes_);
    if (sol.nodes_.back().x != to_x)
        sol.nodes_.push_back(advance(q, E, sol.nodes_.back(), to_x, opts, nullptr));
    return sol;
}

OdeState Solution::at(double x) const {
    if (nodes_.empty())
        throw Error("Solution: empty");
    if (x <= nodes_.front().x)
        return nodes_.front();
    if (x >= nodes_.back().x)
        return nodes_.back();
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x,
                               [](double v, const OdeState& n) { return v < n.x; });
    const OdeState& base = *(it - 1);
    if (base.x == x)
        return base;
    return advance(q_, energy_, base, x, opts_, nullptr);
}

FundamentalPair FundamentalPair::build(const PiecewisePotential& u, double x0, double x1) {
    FundamentalPair pair;
    pair.phi0 = Solution::integrate(u, 0.0, {x0, 1.0, 0.0}, x1);
    pair.phi1 = Solution::integrate(u, 0.0, {x0, 0.0, 1.0}, x1);
    return pair;
}

double FundamentalPair::wronskian_at(double x) const {
    const OdeState a = phi0.at(x);
    const OdeState b = phi1.at(x);
    return a.y * b.dy - a.dy * b.y;
}

struct InhomogeneousSolution::Impl {
    FundamentalPair pair;
    CumulativeIntegral int_phi0_f; // int phi0(s) f(s) ds
    CumulativeIntegral int_phi1_f; // int phi1(s) f(s) ds
    double y0 = 0.0, dy0 = 0.0;
};

InhomogeneousSolution::InhomogeneousSolution(const PiecewisePotential& u, Integrand f,
                                             OdeState init, double x1,
                                             std::vector<double> f_breakpoints, double rtol) {
    auto impl = std::make_shared<Impl>();
    impl->pair = FundamentalPair::build(u, init.x, x1);
    impl->y0 = init.y;
    impl->dy0 = init.dy;

    for (double c : u.breakpoints())
        f_breakpoints.push_back(c);

    const auto& pair = impl->pair;
    auto g0 = [pair, f](double s) { return pair.phi0.at(s).y * f(s); };
    auto g1 = [pair, f](double s) { return pair.phi1.at(s).y * f(s); };
    const double max_panel = std::max(0.25, (x1 - init.x) / 256.0);
    impl->int_phi0_f = CumulativeIntegral(g0, init.x, x1, f_breakpoints, rtol, max_panel);
    impl->int_phi1_f = CumulativeIntegral(g1, init.x, x1, f_breakpoints, rtol, max_panel);
    impl_ = std::move(impl);
}

OdeState InhomogeneousSolution::at(double x) const {
    if (!impl_)
        throw Error("InhomogeneousSolution: empty");
    const OdeState p0 = impl_->pair.phi0.at(x);
    const OdeState p1 = impl_->pair.phi1.at(x);
    const double a = impl_->int_phi0_f.upto(x); // int phi0 f
    const double b = impl_->int_phi1_f.upto(x); // int phi1 f
    // v = y0 phi0 + dy0 phi1 + phi0 * int(phi1 f) - phi1 * int(phi0 f)
    const double v = impl_->y0 * p0.y + impl_->dy0 * p1.y + p0.y * b - p1.y * a;
    const double dv = impl_->y0 * p0.dy + impl_->dy0 * p1.dy + p0.dy * b - p1.dy * a;
    return {x, v, dv};
}

} // namespace tlab
