"""Suspicious-link detection for social graphs.

Combines a structural signal (the mutual clustering coefficient of each
connected pair) with fuzzy profile-attribute similarity, feeds both into
small from-scratch classifiers, and ships a calibrated synthetic
community generator plus a command-line pipeline.
"""

from mcclink.errors import (
    ConvergenceError,
    InputError,
    InvariantError,
    McclinkError,
)
from mcclink.features import FeatureRow, FeatureTable, build_feature_table
from mcclink.graph import SocialGraph, mcc_all, mutual_clustering_coefficient
from mcclink.metrics import EvalReport, auroc, evaluate, metrics, roc_curve
from mcclink.profiles import Profile
from mcclink.synth import SynthConfig, calibration_report, synthesize

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "EvalReport",
    "FeatureRow",
    "FeatureTable",
    "InputError",
    "InvariantError",
    "McclinkError",
    "Profile",
    "SocialGraph",
    "SynthConfig",
    "__version__",
    "auroc",
    "build_feature_table",
    "calibration_report",
    "evaluate",
    "mcc_all",
    "metrics",
    "mutual_clustering_coefficient",
    "roc_curve",
    "synthesize",
]
