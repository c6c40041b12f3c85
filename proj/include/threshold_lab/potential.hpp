#pragma once

#include <optional>
#include <string>
#include <vector>

#include "threshold_lab/errors.hpp"

namespace tlab {

enum class HarmonicKind { Sin, Cos };

/// One trigonometric term A*sin(w x + phi) or A*cos(w x + phi).
struct Harmonic {
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
    HarmonicKind kind = HarmonicKind::Sin;

    double eval(double x) const;
    Harmonic derivative() const;
};

/// An analytic piece of a potential on [from, to]: polynomial + harmonics.
/// Evaluation is closed-form, so derivatives, rescalings and moments stay exact.
struct PotentialPiece {
    double from = 0.0;
    double to = 0.0;
    std::vector<double> poly;        // c0 + c1 x + c2 x^2 + ...
    std::vector<Harmonic> harmonics;

    double eval(double x) const;
    bool is_constant() const;
    double constant_value() const;
    PotentialPiece derivative() const;

    /// Exact image of the piece under x -> (x - shift)/a composed with value
    /// scaling, i.e. returns a piece q with q(x) = scale * p(a*x + shift) on
    /// the mapped interval. Requires a != 0.
    PotentialPiece substituted(double a, double shift, double scale) const;

    /// Closed-form integral of x^n * piece(x) over [lo, hi] (clipped to the piece).
    double moment(int n, double lo, double hi) const;
};

/// A compactly supported potential: disjoint analytic pieces inside [-b, b],
/// zero elsewhere.
class PiecewisePotential {
public:
    PiecewisePotential() = default;                          // the zero potential, b = 1
    PiecewisePotential(std::vector<PotentialPiece> pieces, double half_width);

    double b() const { return b_; }
    const std::vector<PotentialPiece>& pieces() const { return pieces_; }
    bool is_zero() const { return pieces_.empty(); }

    double operator()(double x) const;

    /// Sorted breakpoints (piece edges); useful as quadrature/propagation splits.
    std::vector<double> breakpoints() const;

    /// Left/right one-sided limits at x.
    double limit_from_left(double x) const;
    double limit_from_right(double x) const;

    /// True on [lo, hi] iff the potential restricted there is a single constant.
    bool constant_on(double lo, double hi, double* value) const;

    /// Crude lower bound of the potential by dense sampling (used to size omega_max).
    double min_sampled(int samples_per_piece = 512) const;

private:
    std::vector<PotentialPiece> pieces_;
    double b_ = 1.0;
};

enum class MomentRegion { Full, NegativeHalf, PositiveHalf };

double evaluate(const PiecewisePotential& p, double x);

/// Exact piecewise derivative. Throws NotW12 if the potential jumps at a
/// breakpoint or does not vanish at its support endpoints (tolerance `tol`
/// scaled by the local magnitude), since then V is not in W^1_2.
PiecewisePotential derivative(const PiecewisePotential& p, double tol = 1e-12);

/// Integral of x^n p(x) over the region, closed form by default.
double moment(const PiecewisePotential& p, int n, MomentRegion region = MomentRegion::Full);
/// Same via adaptive quadrature (independent route, for cross-checks).
double moment_by_quadrature(const PiecewisePotential& p, int n,
                            MomentRegion region = MomentRegion::Full, double rtol = 1e-12);

PiecewisePotential translated(const PiecewisePotential& p, double s);

/// Exact merged sum of two potentials (pieces split at the union of breakpoints).
PiecewisePotential combined(const PiecewisePotential& a, const PiecewisePotential& b);

PiecewisePotential scaled_by(const PiecewisePotential& p, double factor);

// ---------------------------------------------------------------------------

/// c * lambda^p
struct PowerLaw {
    double c = 1.0;
    double p = 0.0;
    double at(double lambda) const;
};

enum class LimitClass { FinitePositive, Infinite, Zero };

/// The map lambda -> alpha_lambda together with its limit classification.
///
/// Kinds: `const` (alpha), `power` (c*lambda^p), `table` (log-log interpolated),
/// and `const+power` (alpha + c*lambda^p), the last one expressing families
/// alpha_lambda = alpha + eps_lambda that converge to a positive limit.
class ScalingFamily {
public:
    enum class Kind { Const, Power, Table, ConstPlusPower };

    static ScalingFamily constant(double alpha);
    static ScalingFamily power(double c, double p);
    static ScalingFamily table(std::vector<std::pair<double, double>> rows);
    static ScalingFamily const_plus_power(double alpha, double c, double p);

    Kind kind() const { return kind_; }
    double alpha_at(double lambda) const;   // throws OutOfTable for table kind
    LimitClass limit_class() const;

    /// The finite positive limit (FinitePositive class only).
    double limit() const;

    /// For const+power: the infinitesimal eps_lambda = alpha_lambda - alpha.
    std::optional<PowerLaw> epsilon() const;

    /// For power kinds: the exponent, used by the symbolic rate checks.
    std::optional<double> exponent() const;

    const std::vector<std::pair<double, double>>& rows() const { return rows_; }

    std::string kind_name() const;

private:
    Kind kind_ = Kind::Const;
    double alpha_ = 1.0;   // Const / ConstPlusPower
    PowerLaw law_;         // Power / ConstPlusPower
    std::vector<std::pair<double, double>> rows_;
};

/// lambda * alpha_lambda * V(alpha_lambda x) as an exact PiecewisePotential.
PiecewisePotential scaled_potential(const PiecewisePotential& v, const ScalingFamily& f,
                                    double lambda);
/// Same with alpha given directly; `origin` recentres the dilation at x = origin.
PiecewisePotential scaled_potential_at(const PiecewisePotential& v, double alpha,
                                       double coupling, double origin = 0.0);

// ---------------------------------------------------------------------------
// JSON (schemas fixed by the external interface)

PiecewisePotential potential_from_json(const std::string& text);
std::string potential_to_json(const PiecewisePotential& p);
ScalingFamily scaling_from_json(const std::string& text);
std::string scaling_to_json(const ScalingFamily& f);

} // namespace tlab
