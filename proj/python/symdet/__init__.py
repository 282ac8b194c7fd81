"""Reflection symmetry detection: log-Gabor edge features, histogram-weighted
pair voting in (rho, theta) space, and the axis evaluation metrics."""

from ._core import (
    Config,
    FilterBank,
    NoFeaturesError,
    NoSymmetryEvidenceError,
    SymdetError,
    angle_between,
    butterworth_value,
    circular_shift,
    detect,
    evaluate,
    intersection,
    is_true_positive,
    l1_normalize,
    mirror_about_anchor,
    pair_axis_params,
    parse_groundtruth,
    reverse,
)

__version__ = "0.1.0"

__all__ = [
    "Config",
    "FilterBank",
    "NoFeaturesError",
    "NoSymmetryEvidenceError",
    "SymdetError",
    "angle_between",
    "butterworth_value",
    "circular_shift",
    "detect",
    "evaluate",
    "intersection",
    "is_true_positive",
    "l1_normalize",
    "mirror_about_anchor",
    "pair_axis_params",
    "parse_groundtruth",
    "reverse",
]
