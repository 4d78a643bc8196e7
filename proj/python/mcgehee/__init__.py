"""McGehee blowup of electromagnetic Lagrangian systems at an equilibrium."""

import json

from ._core import (
    Config,
    Error,
    HypothesisError,
    InputError,
    PreconditionError,
    ValidationError,
    escape_sweep,
    fixed_points,
    hausdorff_distance,
    integrate,
    verify,
)
from ._core import analyze_json as _analyze_json

__all__ = [
    "Config",
    "Error",
    "HypothesisError",
    "InputError",
    "PreconditionError",
    "ValidationError",
    "analyze",
    "escape_sweep",
    "fixed_points",
    "hausdorff_distance",
    "integrate",
    "verify",
]


def analyze(config):
    """Jets, hypotheses and verdicts as a dict (same content as analyze.json)."""
    return json.loads(_analyze_json(config))
