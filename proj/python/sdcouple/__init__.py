"""Coupled Stokes-Darcy finite element solver (compiled core)."""

from ._core import (
    ConfigError,
    StepError,
    check,
    config,
    conv_order,
    convergence,
    docs,
    eval_exact,
    infsup,
    mesh_counts,
    run,
)

__all__ = [
    "ConfigError",
    "StepError",
    "check",
    "config",
    "conv_order",
    "convergence",
    "docs",
    "eval_exact",
    "infsup",
    "mesh_counts",
    "run",
]
