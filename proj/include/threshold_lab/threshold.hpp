#pragma once

#include <optional>
#include <string>
#include <vector>

#include "threshold_lab/potential.hpp"
#include "threshold_lab/resonance.hpp"

namespace tlab {

/// -d^2/dx^2 on W_2^2(R\{0}) with the coupling conditions
///   phi(+0) = kappa phi(-0),  phi'(+0) = beta phi(-0) + kappa^{-1} phi'(-0).
struct PointInteraction {
    double kappa = 1.0;
    double beta = 0.0;
};

/// The unique negative eigenvalue E = -(kappa beta / (kappa^2+1))^2 when
/// kappa*beta < 0; nullopt otherwise.
std::optional<double> point_interaction_eigenvalue(const PointInteraction& pi);

enum class ThresholdCase { T1FiniteAlpha, T1AlphaInfinite, T1AlphaZero, T2, T3, T4 };

std::string case_name(ThresholdCase c);

struct Condition {
    std::string name;
    double value = 0.0;
    bool satisfied = false;
};

/// A theorem's threshold constant k, the applicability checks, and the
/// predicted absorption rate lambda -> e_lambda = -(rate * k)^2.
/// Predictions are produced even when conditions fail (conditions_ok = false),
/// so non-thresholds can be demonstrated.
struct ThresholdPrediction {
    ThresholdCase which = ThresholdCase::T1FiniteAlpha;
    double k = 0.0;
    double theta = 1.0;
    bool conditions_ok = false;
    std::vector<Condition> conditions;
    std::string rate; // human-readable description of omega_lambda

    ScalingFamily family;
    std::optional<PowerLaw> eps; // T2 only

    /// The theorem-specific scale multiplying |k| in omega_lambda:
    /// lambda (order-2), lambda|eps| (T2), lambda/alpha (T3), lambda*alpha (T4).
    double rate_scale(double lambda) const;
    double omega_at(double lambda) const;
    double predicted_e(double lambda) const; // -omega^2
};

/// Order-2 absorption (first main theorem); the case is selected from the
/// scaling family's limit class. `origin` recentres the dilation point and the
/// u(0), V(0) markers (used by the translation-covariance checks).
ThresholdPrediction predict_order2(const PiecewisePotential& u_pot, const PiecewisePotential& v,
                                   const ScalingFamily& f, const HalfBoundState& h,
                                   double origin = 0.0);

/// alpha_lambda -> alpha with int V(alpha.)u^2 = 0: rate lambda*eps_lambda.
/// Throws NotW12 if V lacks the required Sobolev regularity; eps defaults to
/// the const+power component of `f`.
ThresholdPrediction predict_t2(const PiecewisePotential& u_pot, const PiecewisePotential& v,
                               const ScalingFamily& f, const HalfBoundState& h,
                               std::optional<PowerLaw> eps = std::nullopt, double origin = 0.0);

/// alpha_lambda -> infinity with int V = 0: rate lambda/alpha_lambda.
ThresholdPrediction predict_t3(const PiecewisePotential& u_pot, const PiecewisePotential& v,
                               const ScalingFamily& f, const HalfBoundState& h,
                               double origin = 0.0);

/// alpha_lambda -> 0 with the half-line moments balanced: rate lambda*alpha_lambda.
/// Throws DiscontinuousAtZero if V jumps at the origin.
ThresholdPrediction predict_t4(const PiecewisePotential& u_pot, const PiecewisePotential& v,
                               const ScalingFamily& f, const HalfBoundState& h,
                               double origin = 0.0);

} // namespace tlab
