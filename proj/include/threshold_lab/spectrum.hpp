#pragma once

#include <optional>
#include <vector>

#include "threshold_lab/ode.hpp"
#include "threshold_lab/potential.hpp"

namespace tlab {

/// H_lambda = -d^2/dx^2 + U + lambda alpha_lambda V(alpha_lambda x) at a fixed lambda.
struct ScaledProblem {
    PiecewisePotential u;
    PiecewisePotential v;
    ScalingFamily family;
    double lambda = 0.0;

    PiecewisePotential scaled_q() const;   // U + lambda alpha V(alpha x), exactly merged
    double half_width() const;             // max(b_U, b_V / alpha_lambda)
};

struct EigenSolveOptions {
    double omega_min = 1e-12;   // below this the state counts as "at threshold"
    double omega_max = 0.0;     // 0 = auto: sqrt(max(0, -min Q)) + 1
    int geometric_points = 256;
    int linear_points = 256;
    double root_rel_width = 1e-13;
};

struct EigenSolveResult {
    std::vector<double> eigenvalues; // sorted increasing, all negative
    std::vector<double> omegas;      // omega = sqrt(-E), matching order
    std::vector<double> residuals;   // normalized |F(omega)| at convergence
    int bracket_count = 0;
};

/// Left-normalized shooting defect F(omega) = y'(B) + omega y(B) after
/// propagating from (-B, 1, omega) at E = -omega^2; its positive zeros are
/// exactly the negative eigenvalues E = -omega^2. The value is rescaled by a
/// positive factor if the propagation grows past 1e150 (sign and zeros are
/// unaffected).
double mismatch(const PiecewisePotential& q, double omega);

/// Mismatch together with the positive normalization scale |y'(B)| + omega |y(B)|.
struct MismatchValue {
    double value = 0.0;
    double scale = 0.0;
};
MismatchValue mismatch_scaled(const PiecewisePotential& q, double omega);

/// All negative eigenvalues of -d^2/dx^2 + Q: a geometric+linear omega grid is
/// scanned for sign changes of the mismatch, each bracket refined by bisection.
EigenSolveResult find_negative_eigenvalues(const PiecewisePotential& q,
                                           const EigenSolveOptions& opts = {});

/// The negative eigenvalue closest to zero (scan upward from omega_min, take
/// the first bracket); nullopt when no negative eigenvalue is resolvable.
std::optional<double> threshold_eigenvalue(const PiecewisePotential& q,
                                           const EigenSolveOptions& opts = {});
std::optional<double> threshold_eigenvalue(const ScaledProblem& problem,
                                           const EigenSolveOptions& opts = {});

} // namespace tlab
