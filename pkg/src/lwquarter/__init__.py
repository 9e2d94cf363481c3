"""Lax-Wendroff on the quarter-plane with extrapolation boundaries: schemes,
energy audits and stability-region maps."""

from lwquarter.core import (
    CflError,
    CflPair,
    Field1D,
    Field2D,
    GridSpec,
    SupportError,
    fill_ghosts_1d,
    fill_ghosts_2d,
    project_initial_1d,
    project_initial_2d,
)
from lwquarter.energy import (
    EnergyBreakdown,
    breakdown,
    inner,
    lemma1_verify,
    lemma2_verify,
    lemma3_verify,
    norm_sq,
    theorem1_check,
)
from lwquarter.regions import (
    HermSymbol2,
    QuadForm4,
    RegionMap,
    boundary_negdef_all_xi,
    boundary_symbol,
    corner_form,
    is_negative_definite_4,
    reduced_corner_form,
    sweep,
)
from lwquarter.scheme1d import boundary_form_1d, energy_modified_1d, energy_standard_1d, step_1d
from lwquarter.scheme2d import compute_v, compute_w, decompose, run, step_2d

__version__ = "0.1.0"

__all__ = [
    "CflError",
    "CflPair",
    "EnergyBreakdown",
    "Field1D",
    "Field2D",
    "GridSpec",
    "HermSymbol2",
    "QuadForm4",
    "RegionMap",
    "SupportError",
    "boundary_form_1d",
    "boundary_negdef_all_xi",
    "boundary_symbol",
    "breakdown",
    "compute_v",
    "compute_w",
    "corner_form",
    "decompose",
    "energy_modified_1d",
    "energy_standard_1d",
    "fill_ghosts_1d",
    "fill_ghosts_2d",
    "inner",
    "is_negative_definite_4",
    "lemma1_verify",
    "lemma2_verify",
    "lemma3_verify",
    "norm_sq",
    "project_initial_1d",
    "project_initial_2d",
    "reduced_corner_form",
    "run",
    "step_1d",
    "step_2d",
    "sweep",
    "theorem1_check",
]
