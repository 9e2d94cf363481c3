r"""
Two-dimensional Lax-Wendroff with a stabilizer
----------------------------------------------

One step is split as ``u^{n+1} = u - w + v`` on interior indices with

.. math::

    v = -\alpha D_{1,0} u - \beta D_{2,0} u, \qquad
    w = -\frac{\alpha^2}{2} \Delta_1 u - \frac{\beta^2}{2} \Delta_2 u
        - \alpha\beta D_{1,0} D_{2,0} u
        + \frac{\alpha^2 + \beta^2}{8} \Delta_1 \Delta_2 u.

The ghost ring of the result is refilled by second-order extrapolation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from lwquarter.core import CflPair, Field2D, fill_ghosts_2d
from lwquarter.stencils import compose, op

INTERIOR = (slice(1, -1), slice(1, -1))


@dataclass(frozen=True)
class StepDecomposition:
    v: np.ndarray
    w: np.ndarray


class NonFiniteError(FloatingPointError):
    pass


def compute_v(u: Field2D, cfl: CflPair) -> np.ndarray:
    a, b = cfl.alpha, cfl.beta
    return (-a * op("D1_0", u) - b * op("D2_0", u))[INTERIOR]


def compute_w(u: Field2D, cfl: CflPair) -> np.ndarray:
    a, b = cfl.alpha, cfl.beta
    w = (
        -0.5 * a**2 * op("LAP1", u)
        - 0.5 * b**2 * op("LAP2", u)
        - a * b * compose(("D1_0", "D2_0"), u)
        + 0.125 * (a**2 + b**2) * compose(("LAP1", "LAP2"), u)
    )
    return w[INTERIOR]


def decompose(u: Field2D, cfl: CflPair) -> StepDecomposition:
    return StepDecomposition(v=compute_v(u, cfl), w=compute_w(u, cfl))


def step_2d(u: Field2D, cfl: CflPair, mode: Optional[str] = "strict") -> Field2D:
    """Advance one time step.

    *mode* selects the CFL admission check (``"strict"`` or ``"explore"``);
    ``None`` skips it, which the region experiments and tests use.
    """
    if mode is not None:
        cfl.check(mode)
    new = np.zeros_like(u.data)
    new[INTERIOR] = u.interior - compute_w(u, cfl) + compute_v(u, cfl)
    return fill_ghosts_2d(Field2D(new))


Observer = Callable[[int, float, object], None]


def run(
    u0: Field2D,
    cfl: CflPair,
    steps: int,
    observer: Optional[Observer] = None,
    mode: Optional[str] = "strict",
) -> Field2D:
    """Apply :func:`step_2d` *steps* times.

    When *observer* is given it is called after every step with
    ``(n, norm_sq(u^n), breakdown(u^n))``, where the breakdown describes the
    transition from ``u^n`` to ``u^{n+1}``.
    """
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    if mode is not None:
        cfl.check(mode)
    if observer is not None:
        from lwquarter.energy import breakdown, norm_sq

    u = u0
    for n in range(steps):
        if observer is not None:
            observer(n, norm_sq(u), breakdown(u, cfl, check_support=False))
        u = step_2d(u, cfl, mode=None)
        if not np.all(np.isfinite(u.data)):
            raise NonFiniteError(f"non-finite value after step {n + 1}")
    return u
