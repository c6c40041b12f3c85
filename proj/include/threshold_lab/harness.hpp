#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "threshold_lab/potential.hpp"
#include "threshold_lab/quasimode.hpp"
#include "threshold_lab/spectrum.hpp"
#include "threshold_lab/threshold.hpp"

namespace tlab {

struct LambdaGrid {
    double lambda_max = 1e-2;
    double lambda_min = 1e-5;
    int points = 25;

    void validate() const;
    /// Geometric grid from lambda_max down to lambda_min, inclusive.
    std::vector<double> values() const;
};

/// A sweep/verify configuration. File references in the JSON config are
/// resolved relative to the config file's directory.
struct Experiment {
    PiecewisePotential u;
    PiecewisePotential v;
    ScalingFamily scaling;
    std::string which = "auto"; // auto|t1|t2|t3|t4
    LambdaGrid grid;
    std::map<std::string, double> tolerances;
    std::string out_path;
    std::string out_format = "json";
    bool force = false;

    double tol(const std::string& name, double fallback) const;

    static Experiment load(const std::string& config_path);
    static Experiment from_json_text(const std::string& text, const std::string& base_dir);
};

struct SweepRow {
    double lambda = 0.0;
    double alpha = 0.0;
    double scale = 0.0; // theorem rate scale at this lambda
    double e_measured = 0.0;
    double e_predicted = 0.0;
    double ratio = 0.0; // e_measured / e_predicted
    double omega = 0.0; // sqrt(-e_measured)
    double residual_ratio = 0.0;
    bool found = false;
    bool quasimode_built = false;
    bool certificate_ok = false;
    double certificate_gap = 0.0;   // |e_measured + omega_q^2|
    double certificate_bound = 0.0; // ||r|| / ||psi||
    std::string status = "ok";
};

struct SweepReport {
    std::string which;
    ThresholdPrediction prediction;
    double k_predicted = 0.0;
    double fitted_k = 0.0;
    double relative_error = 0.0;
    std::optional<double> fit_exponent;
    std::optional<double> fit_constant;
    bool pass = false;
    std::string failure_reason;
    std::vector<SweepRow> rows;

    std::string to_json() const;
    std::string to_csv() const;
};

/// Resolve the half-bound state and theorem prediction for an experiment.
/// Throws if U has no zero-energy resonance, or (unless force) if the
/// theorem's conditions fail.
ThresholdPrediction make_prediction(const Experiment& e, const HalfBoundState& h);

/// Measure e_lambda across the grid, compare against the prediction and fit
/// the rate constant. Per-row solver failures mark the row and continue.
SweepReport sweep(const Experiment& e);

/// sweep() plus, for t2/t3/t4, a quasimode at every grid lambda with the
/// Lemma-4.2 certificate |e_measured + omega^2| <= ||r||/||psi||.
SweepReport verify(const Experiment& e);

/// Least-squares fit of log|e_measured| against log(rate scale) over the
/// successful rows; returns (exponent, constant) with e ~ -constant^... i.e.
/// |e| = constant * scale^exponent. Throws InsufficientData for < 3 rows.
std::pair<double, double> fit_rate(const std::vector<SweepRow>& rows);

} // namespace tlab
