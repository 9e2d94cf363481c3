"""
Difference and averaging operators
----------------------------------

Every operator maps a ghost-padded array to an array of the same shape.
Entries whose stencil would leave storage are set to NaN, so compositions
shrink their domain of definition automatically and any accidental use of
an undefined entry poisons the sums that consume it. There is no implicit
zero extension.

========  ==========================================
tag       stencil at ``(j, k)``
========  ==========================================
``D1+``   ``u[j+1,k] - u[j,k]``
``D1-``   ``u[j,k] - u[j-1,k]``
``D1_0``  ``(u[j+1,k] - u[j-1,k]) / 2``
``LAP1``  ``u[j+1,k] - 2 u[j,k] + u[j-1,k]``
``A1+``   ``(u[j,k] + u[j+1,k]) / 2``
``A1-``   ``(u[j-1,k] + u[j,k]) / 2``
========  ==========================================

and the same with ``2`` for the second index.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable, Tuple, Union

import numpy as np

from lwquarter.core import Field1D, Field2D


class StencilOp(str, Enum):
    D1P = "D1+"
    D1M = "D1-"
    D2P = "D2+"
    D2M = "D2-"
    D10 = "D1_0"
    D20 = "D2_0"
    LAP1 = "LAP1"
    LAP2 = "LAP2"
    A1P = "A1+"
    A1M = "A1-"
    A2P = "A2+"
    A2M = "A2-"


def _shift(u: np.ndarray, axis: int, s: int) -> np.ndarray:
    """Return ``r`` with ``r[i] = u[i + s]`` along *axis*, NaN outside."""
    r = np.full_like(u, np.nan)
    n = u.shape[axis]
    src = [slice(None)] * u.ndim
    dst = [slice(None)] * u.ndim
    if s >= 0:
        src[axis] = slice(s, n)
        dst[axis] = slice(0, n - s)
    else:
        src[axis] = slice(0, n + s)
        dst[axis] = slice(-s, n)
    r[tuple(dst)] = u[tuple(src)]
    return r


def _dplus(u, axis):
    return _shift(u, axis, 1) - u


def _dminus(u, axis):
    return u - _shift(u, axis, -1)


def _dzero(u, axis):
    return 0.5 * (_shift(u, axis, 1) - _shift(u, axis, -1))


def _lap(u, axis):
    return _shift(u, axis, 1) - 2.0 * u + _shift(u, axis, -1)


def _aplus(u, axis):
    return 0.5 * (u + _shift(u, axis, 1))


def _aminus(u, axis):
    return 0.5 * (_shift(u, axis, -1) + u)


_TABLE = {
    StencilOp.D1P: (_dplus, 0),
    StencilOp.D1M: (_dminus, 0),
    StencilOp.D10: (_dzero, 0),
    StencilOp.LAP1: (_lap, 0),
    StencilOp.A1P: (_aplus, 0),
    StencilOp.A1M: (_aminus, 0),
    StencilOp.D2P: (_dplus, 1),
    StencilOp.D2M: (_dminus, 1),
    StencilOp.D20: (_dzero, 1),
    StencilOp.LAP2: (_lap, 1),
    StencilOp.A2P: (_aplus, 1),
    StencilOp.A2M: (_aminus, 1),
}

ArrayLike = Union[np.ndarray, Field2D, Field1D]


def _data(u: ArrayLike) -> np.ndarray:
    return u.data if isinstance(u, (Field1D, Field2D)) else np.asarray(u, dtype=np.float64)


def op(tag, u: ArrayLike) -> np.ndarray:
    """Apply one operator to a padded array (or field) and return a padded array."""
    fn, axis = _TABLE[StencilOp(tag)]
    arr = _data(u)
    if axis >= arr.ndim:
        raise ValueError(f"operator {tag} needs a {axis + 1}D array")
    return fn(arr, axis)


def compose(tags: Iterable, u: ArrayLike) -> np.ndarray:
    """Apply ``tags`` right to left, so ``compose(("D1+", "D2+"), u) = D1+ D2+ u``."""
    arr = _data(u)
    for tag in reversed(tuple(tags)):
        arr = op(tag, arr)
    return arr


def apply(tag, field: ArrayLike, at: Tuple[int, ...]) -> float:
    """Evaluate one operator at the grid index *at* (origin is storage slot 1)."""
    arr = _data(field)
    idx = tuple(i + 1 for i in at)
    if len(idx) != arr.ndim or any(not 0 <= i < n for i, n in zip(idx, arr.shape)):
        raise IndexError(f"index {tuple(at)} outside stored range for operator {StencilOp(tag).value}")
    val = op(tag, arr)[idx]
    if np.isnan(val):
        raise IndexError(
            f"operator {StencilOp(tag).value} at {tuple(at)} needs neighbours outside storage"
        )
    return float(val)


# {{{ one-dimensional summation identities


def _as_sequence(u) -> np.ndarray:
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1 or u.size < 3:
        raise ValueError("need a 1D sequence of length >= 3")
    return u


def telescoping_ipp_1d(U, V) -> Tuple[float, float]:
    r"""Both sides of the discrete integration by parts formula.

    .. math::

        \sum_{j \ge 1} (\Delta U_j) V_j
            = -\sum_{j \ge 1} (D_+ U_j)(D_+ V_j) - (D_+ U_0) V_1

    *U* and *V* are given on ``j = 0..n-1``. Sums run over the stored range
    where every factor is defined (``1 <= j <= n-2`` on the left); the right
    side carries the far-end term ``(D_+ U_{n-2}) V_{n-2}``, which vanishes
    for sequences supported away from the end.
    """
    U, V = _as_sequence(U), _as_sequence(V)
    if U.shape != V.shape:
        raise ValueError(f"length mismatch: {U.size} != {V.size}")
    n = U.size
    lap = U[2:] - 2.0 * U[1:-1] + U[:-2]          # j = 1..n-2
    dU, dV = np.diff(U), np.diff(V)               # j = 0..n-2
    lhs = float(np.sum(lap * V[1:-1]))
    rhs = float(-np.sum(dU[1:n - 2] * dV[1:n - 2]) - dU[0] * V[1] + dU[n - 2] * V[n - 2])
    return lhs, rhs


def square_sum_identity_1d(U) -> Tuple[float, float]:
    r"""Both sides of

    .. math::

        \sum_{j \ge 1} (D_0 U_j)^2 + \frac14 \sum_{j \ge 1} (\Delta U_j)^2
            = \sum_{j \ge 1} (D_+ U_j)^2 + \frac12 (D_+ U_0)^2

    with the same truncation convention as :func:`telescoping_ipp_1d`; the
    right side subtracts ``(D_+ U_{n-2})^2 / 2``.
    """
    U = _as_sequence(U)
    n = U.size
    d0 = 0.5 * (U[2:] - U[:-2])
    lap = U[2:] - 2.0 * U[1:-1] + U[:-2]
    dU = np.diff(U)
    lhs = float(np.sum(d0**2) + 0.25 * np.sum(lap**2))
    rhs = float(np.sum(dU[1:n - 1] ** 2) + 0.5 * dU[0] ** 2 - 0.5 * dU[n - 2] ** 2)
    return lhs, rhs

# }}}
