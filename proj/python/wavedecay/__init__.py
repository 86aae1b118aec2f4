"""Local energy decay experiments for u_tt = c(x)^2 Lap u."""

import json

from ._core import (
    SCHEMA_VERSION,
    ConfigError,
    Error,
    PreconditionError,
    fit_decay,
    gronwall_bound,
    profile_constants,
    riesz_integral,
)
from . import _core

__all__ = [
    "SCHEMA_VERSION",
    "ConfigError",
    "Error",
    "PreconditionError",
    "fit_decay",
    "gronwall_bound",
    "profile_constants",
    "riesz_integral",
    "run_experiment",
    "verify_suite",
]


def run_experiment(config):
    """Run a config (dict or JSON text); returns one summary dict per matrix point."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_core.run_experiment_json(text))


def verify_suite(name, resolution_scale=1.0):
    return json.loads(_core.verify_suite_json(name, resolution_scale))
