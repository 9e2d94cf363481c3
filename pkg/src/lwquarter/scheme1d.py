"""
One-dimensional Lax-Wendroff on the half-line
---------------------------------------------

Outgoing transport ``u_t + a u_x = 0`` with ``a < 0`` on ``x >= 0``,
discretized by Lax-Wendroff and closed by second-order extrapolation
``u_{-1} = 2 u_0 - u_1``. The plain ``l^2`` energy obeys a balance whose
boundary term is an indefinite quadratic form of ``(u_0, u_1)``; halving the
weight of ``u_0`` makes the boundary form negative definite.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

from lwquarter.core import CflError, Field1D, check_far_support, fill_ghosts_1d


def _check_alpha(alpha: float) -> None:
    if not 0.0 < abs(alpha) < 1.0:
        raise CflError(f"1D Lax-Wendroff needs 0 < |alpha| < 1, got alpha={alpha}")


def step_1d(state: Field1D, alpha: float) -> Field1D:
    _check_alpha(alpha)
    u = state.data
    up, um, uc = u[2:], u[:-2], u[1:-1]
    new = np.empty_like(u)
    new[1:-1] = uc - 0.5 * alpha * (up - um) + 0.5 * alpha**2 * (up - 2.0 * uc + um)
    return fill_ghosts_1d(Field1D(new))


def energy_standard_1d(state: Field1D) -> float:
    return float(np.sum(state.interior**2))


def energy_modified_1d(state: Field1D, weight: float = 0.5) -> float:
    """Energy with weight *weight* on ``u_0`` (``1/2`` by default)."""
    u = state.interior
    return float(weight * u[0] ** 2 + np.sum(u[1:] ** 2))


def boundary_form_1d(state: Field1D, alpha: float, modified: bool) -> Tuple[float, np.ndarray]:
    """Boundary term of the one-step energy balance and its matrix in ``(u_0, u_1)``.

    Both balances share the shape ``c0 u_0^2 + c1 (u_0 - alpha (u_1 - u_0))^2``;
    the standard energy has ``c0 = (alpha - 1)/2, c1 = (1 + alpha)/2``, the
    modified one ``c0 = c1 = alpha / 2``.
    """
    _check_alpha(alpha)
    if alpha >= 0:
        raise CflError(f"outflow requires alpha < 0, got {alpha}")
    if modified:
        c0 = c1 = 0.5 * alpha
    else:
        c0, c1 = 0.5 * (alpha - 1.0), 0.5 * (1.0 + alpha)
    g = np.array([1.0 + alpha, -alpha])
    mat = c0 * np.outer([1.0, 0.0], [1.0, 0.0]) + c1 * np.outer(g, g)
    u0, u1 = state.value(0), state.value(1)
    value = c0 * u0**2 + c1 * (u0 - alpha * (u1 - u0)) ** 2
    return float(value), mat


def dissipation_1d(state: Field1D, alpha: float, modified: bool) -> float:
    """Interior dissipation ``-alpha^2 (1 - alpha^2)/4 * sum (Delta u_j)^2``.

    The sum starts at ``j = 0`` for the standard energy (where the ghost rule
    makes the term vanish anyway) and at ``j = 1`` for the modified one.
    """
    u = state.data
    lap = u[2:] - 2.0 * u[1:-1] + u[:-2]
    if modified:
        lap = lap[1:]
    return float(-0.25 * alpha**2 * (1.0 - alpha**2) * np.sum(lap**2))


def energy_balance_residual_1d(state: Field1D, alpha: float, modified: bool) -> float:
    """Exact one-step energy identity, returned as a residual (zero up to round-off)."""
    check_far_support(state.data, margin=3)
    energy = energy_modified_1d if modified else energy_standard_1d
    new = step_1d(state, alpha)
    increment = energy(new) - energy(state)
    boundary, _ = boundary_form_1d(state, alpha, modified)
    return increment - (dissipation_1d(state, alpha, modified) + boundary)


def run_1d(state: Field1D, alpha: float, steps: int):
    """Yield the states ``u^1, ..., u^steps``."""
    for _ in range(steps):
        state = step_1d(state, alpha)
        yield state
