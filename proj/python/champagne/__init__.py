"""Python interface to the champagne library."""

import json

from ._champagne import (
    CapacityWeight,
    ChampagneError,
    Config,
    DeltaResult,
    HitEstimate,
    Schedule,
    Shell,
    ShellParams,
    annulus_config,
    annulus_hit_prob,
    build_ball_config,
    compute_k1,
    eta,
    find_k_lo_for_delta,
    hit_probability,
    iterated_log,
    shell_params,
    validate_schedule,
)
from ._champagne import verify as _verify


def verify(config, delta=None, audit=True):
    """Verification report of a configuration, as a dict."""
    return json.loads(_verify(config, delta, audit))


__all__ = [
    "CapacityWeight",
    "ChampagneError",
    "Config",
    "DeltaResult",
    "HitEstimate",
    "Schedule",
    "Shell",
    "ShellParams",
    "annulus_config",
    "annulus_hit_prob",
    "build_ball_config",
    "compute_k1",
    "eta",
    "find_k_lo_for_delta",
    "hit_probability",
    "iterated_log",
    "shell_params",
    "validate_schedule",
    "verify",
]
