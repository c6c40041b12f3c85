"""Coupling constant thresholds of 1D Schrodinger operators.

Thin python surface over the C++ core: compactly supported piecewise
potentials, zero-energy resonance detection, negative-eigenvalue shooting,
closed-form threshold constants, quasimode construction, and lambda sweeps.
"""

import json as _json

from ._threshold_lab import (
    ConfigError,
    Potential,
    ScalingFamily,
    SolverError,
    detect_resonance,
    find_negative_eigenvalues,
    point_interaction_eigenvalue,
    predict,
    quasimode,
    sweep,
    threshold_eigenvalue,
    tune_to_resonance,
    verify,
)

__all__ = [
    "ConfigError",
    "Potential",
    "ScalingFamily",
    "SolverError",
    "detect_resonance",
    "find_negative_eigenvalues",
    "point_interaction_eigenvalue",
    "potential",
    "predict",
    "quasimode",
    "scaling",
    "sweep",
    "threshold_eigenvalue",
    "tune_to_resonance",
    "verify",
]


def potential(spec):
    """Build a Potential from a dict with the JSON schema
    {"b": float, "pieces": [{"from", "to", "poly", "harmonics"}]}."""
    return Potential.from_json(_json.dumps(spec))


def scaling(spec):
    """Build a ScalingFamily from a dict, e.g. {"kind": "power", "c": 1, "p": -0.25}."""
    return ScalingFamily.from_json(_json.dumps(spec))
