#pragma once

#include <optional>

#include "threshold_lab/ode.hpp"
#include "threshold_lab/potential.hpp"

namespace tlab {

/// Normalized half-bound state u of -u'' + U u = 0: u = 1 left of -b,
/// u = theta right of b, with (u, u')(-b) = (1, 0) by construction.
class HalfBoundState {
public:
    HalfBoundState() = default;
    HalfBoundState(Solution interior, double theta, double mismatch);

    double b() const { return interior_.hi(); }
    double theta() const { return theta_; }
    double mismatch() const { return mismatch_; }
    double u_at_0() const { return u(0.0); }
    double du_at_0() const { return du(0.0); }

    double u(double x) const;
    double du(double x) const;

private:
    Solution interior_;
    double theta_ = 1.0;
    double mismatch_ = 0.0;
};

struct ShootResult {
    double value_at_b = 0.0;
    double slope_at_b = 0.0;
    Solution solution;
};

/// Propagate -h'' + U h = 0 from (-b, 1, 0) to b.
ShootResult shoot_zero_energy(const PiecewisePotential& u_pot);

struct ResonanceResult {
    bool resonant = false;
    double mismatch = 0.0; // |h'(b)|
    std::optional<HalfBoundState> state;
};

/// H0 = -d^2/dx^2 + U has a zero-energy resonance iff the Neumann shot stays
/// flat at the right edge: |h'(b)| <= tol * max(1, |h(b)|).
ResonanceResult detect_resonance(const PiecewisePotential& u_pot, double tol = 1e-9);

/// Find gamma in [lo, hi] with h'(b; gamma*U) = 0 by bisection; the resulting
/// gamma*U has a zero-energy resonance. Throws NoBracket if the slope has the
/// same sign at both ends.
double tune_to_resonance(const PiecewisePotential& u_pot, double gamma_lo, double gamma_hi,
                         double tol = 1e-10);

} // namespace tlab
