#include "threshold_lab/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "threshold_lab/quadrature.hpp"

namespace tlab {

PiecewisePotential ScaledProblem::scaled_q() const {
    return combined(u, scaled_potential(v, family, lambda));
}

double ScaledProblem::half_width() const {
    return std::max(u.b(), v.b() / family.alpha_at(lambda));
}

namespace {

struct Shot {
    double y, dy;
};

Shot shoot(const PiecewisePotential& q, double omega) {
    const double big = q.b();
    OdeState s{-big, 1.0, omega};
    double rescales = 0.0;
    // propagate piece by piece so we can renormalize huge exponential growth
    std::vector<double> cuts = q.breakpoints();
    cuts.push_back(big);
    const double E = -omega * omega;
    for (double target : cuts) {
        if (target <= s.x)
            continue;
        s = propagate(q, E, s, target);
        const double mag = std::max(std::abs(s.y), std::abs(s.dy));
        if (mag > 1e150) {
            s.y /= mag;
            s.dy /= mag;
            rescales += 1.0;
        }
    }
    (void)rescales;
    return {s.y, s.dy};
}

} // namespace

double mismatch(const PiecewisePotential& q, double omega) {
    if (!(omega > 0.0))
        throw Error("mismatch: omega must be positive");
    const Shot s = shoot(q, omega);
    return s.dy + omega * s.y;
}

MismatchValue mismatch_scaled(const PiecewisePotential& q, double omega) {
    const Shot s = shoot(q, omega);
    return {s.dy + omega * s.y, std::abs(s.dy) + omega * std::abs(s.y)};
}

namespace {

std::vector<double> omega_grid(const PiecewisePotential& q, const EigenSolveOptions& opts) {
    double omega_max = opts.omega_max;
    if (omega_max <= 0.0)
        omega_max = std::sqrt(std::max(0.0, -q.min_sampled())) + 1.0;
    std::vector<double> grid;
    grid.reserve(std::size_t(opts.geometric_points + opts.linear_points));
    const double lo = opts.omega_min;
    for (int i = 0; i < opts.geometric_points; ++i) {
        const double t = double(i) / double(opts.geometric_points - 1);
        grid.push_back(lo * std::pow(omega_max / lo, t));
    }
    for (int i = 1; i <= opts.linear_points; ++i)
        grid.push_back(omega_max * double(i) / double(opts.linear_points));
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

} // namespace

EigenSolveResult find_negative_eigenvalues(const PiecewisePotential& q,
                                           const EigenSolveOptions& opts) {
    EigenSolveResult result;
    const std::vector<double> grid = omega_grid(q, opts);

    double prev_omega = grid.front();
    double prev_f = mismatch(q, prev_omega);
    std::vector<double> roots;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double omega = grid[i];
        const double f = mismatch(q, omega);
        if (std::isfinite(prev_f) && std::isfinite(f) && (prev_f < 0.0) != (f < 0.0)) {
            ++result.bracket_count;
            auto fn = [&q](double w) { return mismatch(q, w); };
            roots.push_back(bisect_root(fn, prev_omega, omega, opts.root_rel_width));
        }
        prev_omega = omega;
        prev_f = f;
    }

    std::sort(roots.begin(), roots.end(), std::greater<double>()); // E increasing
    for (double w : roots) {
        if (!result.omegas.empty() &&
            std::abs(result.omegas.back() - w) < 1e-9 * std::max(result.omegas.back(), w))
            continue; // duplicate root from overlapping grids
        result.omegas.push_back(w);
        result.eigenvalues.push_back(-w * w);
        const MismatchValue m = mismatch_scaled(q, w);
        result.residuals.push_back(std::abs(m.value) / std::max(m.scale, 1e-300));
    }
    return result;
}

std::optional<double> threshold_eigenvalue(const PiecewisePotential& q,
                                           const EigenSolveOptions& opts) {
    const std::vector<double> grid = omega_grid(q, opts);
    double prev_omega = grid.front();
    double prev_f = mismatch(q, prev_omega);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double omega = grid[i];
        const double f = mismatch(q, omega);
        if (std::isfinite(prev_f) && std::isfinite(f) && (prev_f < 0.0) != (f < 0.0)) {
            auto fn = [&q](double w) { return mismatch(q, w); };
            const double w = bisect_root(fn, prev_omega, omega, opts.root_rel_width);
            return -w * w;
        }
        prev_omega = omega;
        prev_f = f;
    }
    return std::nullopt;
}

std::optional<double> threshold_eigenvalue(const ScaledProblem& problem,
                                           const EigenSolveOptions& opts) {
    if (!(problem.lambda > 0.0))
        throw Error("threshold_eigenvalue: lambda must be positive");
    return threshold_eigenvalue(problem.scaled_q(), opts);
}

} // namespace tlab
