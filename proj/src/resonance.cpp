#include "threshold_lab/resonance.hpp"

#include <cmath>

namespace tlab {

HalfBoundState::HalfBoundState(Solution interior, double theta, double mismatch)
    : interior_(std::move(interior)), theta_(theta), mismatch_(mismatch) {}

double HalfBoundState::u(double x) const {
    if (x <= interior_.lo())
        return 1.0;
    if (x >= interior_.hi())
        return theta_;
    return interior_.at(x).y;
}

double HalfBoundState::du(double x) const {
    if (x <= interior_.lo() || x >= interior_.hi())
        return 0.0;
    return interior_.at(x).dy;
}

ShootResult shoot_zero_energy(const PiecewisePotential& u_pot) {
    const double b = u_pot.b();
    Solution sol = Solution::integrate(u_pot, 0.0, {-b, 1.0, 0.0}, b);
    const OdeState end = sol.back();
    return {end.y, end.dy, std::move(sol)};
}

ResonanceResult detect_resonance(const PiecewisePotential& u_pot, double tol) {
    ShootResult shot = shoot_zero_energy(u_pot);
    ResonanceResult result;
    result.mismatch = std::abs(shot.slope_at_b);
    result.resonant = result.mismatch <= tol * std::max(1.0, std::abs(shot.value_at_b));
    if (result.resonant) {
        if (shot.value_at_b == 0.0)
            throw Error("detect_resonance: h(b) = 0, half-bound state limits must be nonzero");
        result.state = HalfBoundState(std::move(shot.solution), shot.value_at_b, result.mismatch);
    }
    return result;
}

double tune_to_resonance(const PiecewisePotential& u_pot, double gamma_lo, double gamma_hi,
                         double tol) {
    auto slope = [&u_pot](double gamma) {
        return shoot_zero_energy(scaled_by(u_pot, gamma)).slope_at_b;
    };
    double flo = slope(gamma_lo);
    double fhi = slope(gamma_hi);
    if (flo == 0.0)
        return gamma_lo;
    if (fhi == 0.0)
        return gamma_hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw NoBracket("tune_to_resonance: slope has the same sign at both bracket ends");
    while (gamma_hi - gamma_lo > tol) {
        const double mid = 0.5 * (gamma_lo + gamma_hi);
        if (mid <= gamma_lo || mid >= gamma_hi)
            break;
        const double fm = slope(mid);
        if (fm == 0.0)
            return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            gamma_lo = mid;
            flo = fm;
        } else {
            gamma_hi = mid;
        }
    }
    return 0.5 * (gamma_lo + gamma_hi);
}

} // namespace tlab
