# Copyright 2026 The floquet1d Authors
# SPDX-License-Identifier: Apache-2.0
"""Floquet exponents and Bloch modes of the 1D time-modulated acoustic wave equation."""

import json
import os

from . import _floquet1d
from ._floquet1d import FloquetError, absorbing_level, experiment_names, mode_csv_header, trace_csv_header

__all__ = [
    "FloquetError",
    "absorbing_level",
    "default_config",
    "experiment_names",
    "growth_constant",
    "mode_csv_header",
    "problem",
    "resolve_config",
    "run_all",
    "run_experiment",
    "sha256_file",
    "solve_spectrum",
    "solve_targeted",
    "trace_csv_header",
]


def default_config():
    return json.loads(_floquet1d.default_config())


def resolve_config(cfg, name, overrides=None):
    return json.loads(_floquet1d.resolve_config(json.dumps(cfg), name, json.dumps(overrides or {})))


def problem(**settings):
    """Problem settings dict: top-level defaults with the given keys replaced."""
    cfg = default_config()
    cfg.pop("experiments", None)
    for key, value in settings.items():
        if key == "kappa" and isinstance(value, dict):
            cfg["kappa"] = {**cfg["kappa"], **value}
        else:
            cfg[key] = value
    return cfg


def solve_spectrum(settings, vectors=True):
    return _floquet1d.solve_spectrum(json.dumps(settings), vectors)


def solve_targeted(settings, target):
    return _floquet1d.solve_targeted(json.dumps(settings), complex(target))


def growth_constant(kappa):
    return _floquet1d.growth_constant(json.dumps(kappa))


def run_experiment(name, out, cfg=None):
    return json.loads(_floquet1d.run_experiment(name, json.dumps(cfg or default_config()), os.fspath(out)))


def run_all(out, cfg=None):
    return json.loads(_floquet1d.run_all(json.dumps(cfg or default_config()), os.fspath(out)))


def sha256_file(path):
    return _floquet1d.sha256_file(os.fspath(path))
