"""Python bindings for the widomlab C++ core."""

import json as _json

from ._core import (
    DomainError,
    Error,
    NumericalError,
    Reflectionless,
    ValidationError,
    equilibrium,
    green,
    harmonic_measure,
    is_homogeneous,
    normalize_bands,
    suite_ids,
)
from . import _core


def _overrides(config):
    return "" if config is None else _json.dumps(config)


def build_pointmass(config=None):
    """Point-mass construction trace as a dict; `config` overlays the defaults."""
    return _json.loads(_core.build_pointmass_json(_overrides(config)))


def build_sc(config=None):
    return _json.loads(_core.build_sc_json(_overrides(config)))


def verify(ids=None, config=None):
    return _json.loads(_core.verify_json(ids or suite_ids("all"), _overrides(config)))


__all__ = [
    "DomainError",
    "Error",
    "NumericalError",
    "Reflectionless",
    "ValidationError",
    "build_pointmass",
    "build_sc",
    "equilibrium",
    "green",
    "harmonic_measure",
    "is_homogeneous",
    "normalize_bands",
    "suite_ids",
    "verify",
]
