#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "threshold_lab/potential.hpp"
#include "threshold_lab/quadrature.hpp"

namespace tlab {

/// State (y, y') of -y'' + (Q - E) y = 0 at position x.
struct OdeState {
    double x = 0.0;
    double y = 0.0;
    double dy = 0.0;
};

/// Closed-form transfer of (y, y') across a constant potential q over step h:
/// cosh/sinh branch for q - E > 0, cos/sin for q - E < 0, Taylor near zero.
OdeState transfer_constant(const OdeState& s, double q, double E, double to_x);

struct PropagateOptions {
    double rtol = 1e-12;
    double atol = 1e-14;
};

/// Propagate -y'' + (Q - E) y = 0 from `from` to `to_x` (either direction).
/// Constant pieces use the exact transfer; non-constant pieces an adaptive
/// embedded Dormand-Prince 5(4) step. Throws StepFailure on step underflow.
OdeState propagate(const PiecewisePotential& q, double E, OdeState from, double to_x,
                   const PropagateOptions& opts = {});

/// One IVP solution kept evaluable over [x0, x1]: states are cached at piece
/// boundaries and at every accepted adaptive step, and evaluation re-propagates
/// from the nearest cached node to its left.
class Solution {
public:
    Solution() = default;

    static Solution integrate(const PiecewisePotential& q, double E, OdeState init, double to_x,
                              const PropagateOptions& opts = {});

    OdeState at(double x) const;
    double lo() const { return nodes_.front().x; }
    double hi() const { return nodes_.back().x; }
    const OdeState& back() const { return nodes_.back(); }

private:
    PiecewisePotential q_;
    double energy_ = 0.0;
    PropagateOptions opts_;
    std::vector<OdeState> nodes_;
};

/// Zero-energy fundamental pair of -y'' + U y = 0 on [x0, x1]:
/// phi0 has (y, y') = (1, 0) at x0 and phi1 has (0, 1), so their Wronskian
/// phi0 phi1' - phi0' phi1 is identically 1.
struct FundamentalPair {
    Solution phi0;
    Solution phi1;

    static FundamentalPair build(const PiecewisePotential& u, double x0, double x1);
    double wronskian_at(double x) const;
};

/// Solution of the inhomogeneous problem -v'' + U v = f with Cauchy data
/// (v, v')(x0) = (y0, dy0), via variation of parameters with the kernel
/// K(x,s) = phi0(s) phi1(x) - phi0(x) phi1(s):
///   v(x) = y0 phi0 + dy0 phi1 - int_{x0}^{x} K(x, s) f(s) ds.
class InhomogeneousSolution {
public:
    InhomogeneousSolution() = default;
    InhomogeneousSolution(const PiecewisePotential& u, Integrand f, OdeState init, double x1,
                          std::vector<double> f_breakpoints = {}, double rtol = 1e-12);

    /// (v, v') at x.
    OdeState at(double x) const;
    double value(double x) const { return at(x).y; }
    double deriv(double x) const { return at(x).dy; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

} // namespace tlab
