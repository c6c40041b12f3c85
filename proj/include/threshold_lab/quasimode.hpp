#pragma once

#include "threshold_lab/ode.hpp"
#include "threshold_lab/potential.hpp"
#include "threshold_lab/resonance.hpp"
#include "threshold_lab/threshold.hpp"

namespace tlab {

/// Glue corrector rho(t) = t(1-t)^2 on [0,1], zero beyond: rho(0)=0, rho'(0)=1,
/// rho(1)=rho'(1)=0, and rho'' is polynomial so the glue-strip residual
/// integrates exactly.
struct GlueFunction {
    static double rho(double t);
    static double drho(double t);
    static double ddrho(double t);
};

struct JunctionErrors {
    double psi_left = 0.0, dpsi_left = 0.0;     // at -j
    double psi_right = 0.0, dpsi_right = 0.0;   // at +j
    double psi_glue = 0.0, dpsi_glue = 0.0;     // at j+1
    double wprime_defect = 0.0;                 // w'(j) + theta k  (v' for T3/T4)
    double max_jump() const;
};

/// The trial pair (-omega^2, psi) of one of the higher-order regimes:
///   psi = e^{omega(x+j)}            for x < -j,
///   psi = u + wv v + ww w           for |x| < j,
///   psi = a0 e^{-omega(x-j)} + a1 rho(x-j)   for x > j,
/// with coefficients chosen so psi is C^1 and belongs to dom H_lambda.
class Quasimode {
public:
    ThresholdCase regime = ThresholdCase::T2;
    double lambda = 0.0;
    double alpha_lambda = 1.0;
    double eps_lambda = 0.0; // T2 only
    double omega = 0.0;
    double k_lambda = 0.0;
    double a0 = 0.0;
    double a1 = 0.0;
    double junction = 0.0; // +j

    double norm = 0.0;           // ||psi||_L2(R)
    double residual = 0.0;       // ||(H_lambda + omega^2) psi||
    double accuracy_ratio = 0.0; // residual / (norm * omega^2)
    JunctionErrors junction_errors;

    double psi(double x) const;
    double dpsi(double x) const;
    /// (H_lambda + omega^2) psi at x, via the exact cancellation residue.
    double residual_at(double x) const;

    // assembled pieces (exposed for the property tests)
    HalfBoundState u;
    InhomogeneousSolution v;
    InhomogeneousSolution w;
    bool has_w = false;
    double weight_v = 0.0, weight_w = 0.0; // interior correction weights
    PiecewisePotential residual_pot;       // potential factor in the interior residue
    double res_v = 0.0, res_w = 0.0;       // interior residue weights
};

/// alpha_lambda -> alpha: corrections v (problem with V0 = alpha V(alpha.)) and
/// w_lambda (finite-difference potential), omega = lambda eps k_lambda.
/// Throws ConditionsViolated when k_lambda <= 0 (no decaying tails).
Quasimode build_quasimode_t2(const PiecewisePotential& u_pot, const PiecewisePotential& v_pot,
                             const ScalingFamily& f, const PowerLaw& eps, double lambda,
                             const HalfBoundState& h);

/// alpha_lambda -> infinity: omega = lambda k_lambda / alpha_lambda.
Quasimode build_quasimode_t3(const PiecewisePotential& u_pot, const PiecewisePotential& v_pot,
                             const ScalingFamily& f, double lambda, const HalfBoundState& h);

/// alpha_lambda -> 0: junctions at +-b/alpha_lambda, omega = lambda alpha k_lambda.
Quasimode build_quasimode_t4(const PiecewisePotential& u_pot, const PiecewisePotential& v_pot,
                             const ScalingFamily& f, double lambda, const HalfBoundState& h);

/// L2 norm of (H_lambda + omega^2) psi, piecewise: interior residue, glue strip
/// -a1 (rho'' - omega^2 rho), zero on the exact exponential tails.
double residual_norm(const Quasimode& q);

/// ||psi||_L2: closed-form tails plus interior/glue quadrature.
double quasimode_norm(const Quasimode& q);

} // namespace tlab
