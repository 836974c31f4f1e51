"""Numerical laboratory for dispersive identities of Schrodinger operators."""

import json

from ._core import (
    DilabError,
    Grid,
    Hamiltonian,
    bilinear_form_a,
    centered_flux_G,
    dispersive_defect,
    experiments,
    finite_T_terms,
    fourier_transform,
    homogeneous_half_norm_sq,
    initial_data,
    mass,
    propagate_free,
    weighted_mass,
)
from . import _core

__all__ = [
    "DilabError",
    "Grid",
    "Hamiltonian",
    "bilinear_form_a",
    "centered_flux_G",
    "dispersive_defect",
    "experiments",
    "finite_T_terms",
    "fourier_transform",
    "homogeneous_half_norm_sq",
    "initial_data",
    "mass",
    "propagate_free",
    "run",
    "weighted_mass",
]


def run(config, overrides=(), text=False):
    """Run an experiment config (a path, or the config itself with text=True).

    Returns (exit_code, report_dict_or_None, message).
    """
    fn = _core.run_config_text if text else _core.run_config_file
    out = fn(str(config), list(overrides))
    report = json.loads(out["report"]) if out["report"] is not None else None
    return out["exit_code"], report, out["message"]
