"""Optimal quantum cloning by photon symmetrization (C++ core)."""

import json as _json

from ._core import (
    basis,
    cascade_clone,
    clone_analytic,
    clone_oracle,
    coalescence_enhancement,
    estimate_probabilities,
    f_clon,
    f_est,
    hom_curve,
    run_experiment,
    unbiased,
)
from ._core import replicate_table_json as _replicate_table_json

__all__ = [
    "basis",
    "cascade_clone",
    "clone_analytic",
    "clone_oracle",
    "coalescence_enhancement",
    "estimate_probabilities",
    "f_clon",
    "f_est",
    "hom_curve",
    "replicate_table",
    "run_experiment",
    "unbiased",
]


def replicate_table(basis_name, **kwargs):
    """Run all four inputs of basis "I" or "IV"; returns the JSON summary as a dict."""
    return _json.loads(_replicate_table_json(basis_name, **kwargs))
