#pragma once

#include <functional>
#include <span>
#include <vector>

#include "threshold_lab/errors.hpp"

namespace tlab {

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (G7,K15) integration on [a, b].
/// Throws QuadratureFailure if the interval queue is exhausted without
/// reaching the requested tolerance.
double integrate(const Integrand& f, double a, double b, double rtol = 1e-12,
                 double atol = 1e-15);

/// Same, but the interval is pre-split at the given breakpoints (integrand
/// kinks/jumps); breakpoints outside (a, b) are ignored.
double integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                 double rtol = 1e-12, double atol = 1e-15);

/// sqrt(int_a^b g(x)^2 dx) with per-piece adaptive quadrature.
double l2_norm(const Integrand& g, double a, double b,
               std::span<const double> breakpoints = {}, double rtol = 1e-10);

/// Prefix integral x -> int_{a}^{x} f, panel-cached so that repeated
/// evaluations (e.g. variation-of-parameters kernels) stay cheap.
class CumulativeIntegral {
public:
    CumulativeIntegral() = default;
    CumulativeIntegral(Integrand f, double a, double b, std::span<const double> breakpoints,
                       double rtol = 1e-12, double max_panel = 0.25);

    double upto(double x) const;
    double lo() const { return a_; }
    double hi() const { return b_; }

private:
    Integrand f_;
    double a_ = 0.0, b_ = 0.0;
    double rtol_ = 1e-12;
    double scale_ = 0.0;           // max |prefix|, the absolute-accuracy yardstick
    std::vector<double> edges_;
    std::vector<double> prefix_;   // prefix_[i] = integral over [a, edges_[i]]
};

/// Bisection root refinement on [lo, hi]; f(lo) and f(hi) must have opposite
/// signs (throws NoBracket otherwise). Stops at relative interval width
/// `rel_width` or after `max_iter` halvings.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double rel_width = 1e-13, int max_iter = 200);

} // namespace tlab
