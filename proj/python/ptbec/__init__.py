"""Python access to the PT-symmetric four-well scenarios."""

import json

import numpy as np

from . import _core
from ._core import (
    Error,
    InvalidArgument,
    IoError,
    MissingKey,
    NoOverlap,
    ParseError,
    ScenarioConfig,
    UnitError,
    UnitSystem,
    load_config,
    parse_config,
    two_mode_eigenvalues,
)

__all__ = [
    "Error",
    "InvalidArgument",
    "IoError",
    "MissingKey",
    "NoOverlap",
    "ParseError",
    "ScenarioConfig",
    "UnitError",
    "UnitSystem",
    "compare_csv",
    "describe_trap",
    "load_config",
    "parameter_table",
    "parse_config",
    "read_csv",
    "run_scenario",
    "two_mode_eigenvalues",
]


def _arrays(series):
    return {name: np.asarray(values) for name, values in series.items()}


def run_scenario(config, write=False):
    """Run a config; returns (exit_status, summary dict, columns as numpy arrays)."""
    if isinstance(config, str):
        config = parse_config(config)
    out = _core.run_scenario(config, write)
    return out["exit_status"], json.loads(out["summary"]), _arrays(out["series"])


def compare_csv(a, b):
    return json.loads(_core.compare_csv(a, b))


def read_csv(path):
    return _arrays(_core.read_csv(path))


def describe_trap(config):
    if isinstance(config, str):
        config = parse_config(config)
    return json.loads(_core.describe_trap(config))


def parameter_table(config):
    if isinstance(config, str):
        config = parse_config(config)
    return _core.parameter_table(config)
