#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "threshold_lab/potential.hpp"

namespace tlab::testing {

inline PotentialPiece box(double from, double to, double depth) {
    PotentialPiece p;
    p.from = from;
    p.to = to;
    p.poly = {depth};
    return p;
}

inline PiecewisePotential square_well(double from, double to, double depth, double b) {
    return PiecewisePotential({box(from, to, depth)}, b);
}

/// U = -pi^2 on (0, 1): resonant, u = cos(pi x) inside, theta = -1.
inline PiecewisePotential resonant_well(double b = 1.5) {
    return square_well(0.0, 1.0, -M_PI * M_PI, b);
}

/// U = -pi^2 on (-1/4, 3/4): resonant, u = cos(pi(x+1/4)), theta = -1,
/// u(0) = sqrt(2)/2, u'(0) = -pi sqrt(2)/2.
inline PiecewisePotential shifted_well(double b = 1.0) {
    return square_well(-0.25, 0.75, -M_PI * M_PI, b);
}

/// V = 2 sin^2(pi x) - sin^2(2 pi x) on [0, 1]
///   = 1/2 - cos(2 pi x) + cos(4 pi x)/2, in W^1_2 with V(0) = V(1) = 0.
inline PiecewisePotential t2_potential(double b = 1.25) {
    PotentialPiece p;
    p.from = 0.0;
    p.to = 1.0;
    p.poly = {0.5};
    p.harmonics = {{-1.0, 2.0 * M_PI, 0.0, HarmonicKind::Cos},
                   {0.5, 4.0 * M_PI, 0.0, HarmonicKind::Cos}};
    return PiecewisePotential({p}, b);
}

/// V = x on [-1, 1]: odd, int V = 0, int xV = 2/3.
inline PiecewisePotential ramp_potential(double b = 1.25) {
    PotentialPiece p;
    p.from = -1.0;
    p.to = 1.0;
    p.poly = {0.0, 1.0};
    return PiecewisePotential({p}, b);
}

/// V = cos(pi x) on [-1, 1]: half-line moments vanish, V(0) = 1.
inline PiecewisePotential cosine_potential(double b = 1.25) {
    PotentialPiece p;
    p.from = -1.0;
    p.to = 1.0;
    p.harmonics = {{1.0, M_PI, 0.0, HarmonicKind::Cos}};
    return PiecewisePotential({p}, b);
}

/// A randomly generated potential with polynomial and harmonic content.
inline PiecewisePotential random_potential(std::mt19937& rng, bool smooth_edges = false) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n_pieces = 1 + int(unif(rng) * 2.0);
    std::vector<PotentialPiece> pieces;
    double cursor = -1.5 + unif(rng) * 0.3;
    for (int i = 0; i < n_pieces; ++i) {
        PotentialPiece p;
        p.from = cursor;
        p.to = cursor + 0.4 + unif(rng) * 0.8;
        cursor = p.to + 0.1 + 0.2 * unif(rng);
        const int deg = smooth_edges ? 0 : int(unif(rng) * 3.0);
        for (int d = 0; d <= deg; ++d)
            p.poly.push_back(-2.0 + 4.0 * unif(rng));
        if (unif(rng) < 0.7) {
            Harmonic h;
            h.amplitude = -1.5 + 3.0 * unif(rng);
            h.frequency = 0.5 + 6.0 * unif(rng);
            h.phase = 2.0 * M_PI * unif(rng);
            h.kind = unif(rng) < 0.5 ? HarmonicKind::Sin : HarmonicKind::Cos;
            p.harmonics.push_back(h);
        }
        pieces.push_back(p);
    }
    double hull = 0.0;
    for (const auto& p : pieces)
        hull = std::max({hull, std::abs(p.from), std::abs(p.to)});
    return PiecewisePotential(std::move(pieces), hull + 0.5);
}

} // namespace tlab::testing
