"""
Grids, Courant numbers and ghost-layered fields
-----------------------------------------------

Fields are stored as dense arrays carrying one ghost layer on every side.
Storage slot ``0`` holds the index ``-1`` (the physical ghost cells next to
the outflow boundaries); the last slot holds the artificial far-edge ghost
at index ``nx`` (resp. ``ny``) that closes the truncated box.

.. autoclass:: GridSpec
.. autoclass:: CflPair
.. autoclass:: Field1D
.. autoclass:: Field2D

.. autofunction:: fill_ghosts_1d
.. autofunction:: fill_ghosts_2d
.. autofunction:: project_initial_1d
.. autofunction:: project_initial_2d
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np


class CflError(ValueError):
    """Raised when Courant numbers violate the requested admissibility."""


class SupportError(ValueError):
    """Raised when a field's support comes too close to the far edges."""


# {{{ parameters


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int
    dx: float
    dy: float
    dt: float

    def __post_init__(self) -> None:
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"cell counts must be positive: nx={self.nx}, ny={self.ny}")
        if not (self.dx > 0 and self.dy > 0 and self.dt > 0):
            raise ValueError("dx, dy and dt must be positive")

    @property
    def lam(self) -> float:
        return self.dt / self.dx

    @property
    def mu(self) -> float:
        return self.dt / self.dy

    def require_2d(self) -> None:
        if self.nx < 3 or self.ny < 3:
            raise ValueError(
                f"2D runs need at least 3 interior cells per direction, got {self.nx}x{self.ny}"
            )


@dataclass(frozen=True)
class CflPair:
    """Signed Courant numbers ``alpha = lam * a`` and ``beta = mu * b``.

    Both transport speeds point out of the quarter-plane, so ``alpha`` and
    ``beta`` are non-positive. Zero is tolerated only as the degenerate limit
    used by the region maps; :meth:`check` rejects it in every run mode.

    .. attribute:: bound_m

        Comparability constant: ``|alpha| <= M |beta|`` and ``|beta| <= M |alpha|``.

    .. attribute:: radius_eps

        Upper bound on ``alpha**2 + beta**2`` in strict mode.
    """

    alpha: float
    beta: float
    bound_m: float = 2.0
    radius_eps: float = 0.25

    def __post_init__(self) -> None:
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise CflError("Courant numbers must be finite")
        if self.alpha > 0 or self.beta > 0:
            raise CflError(
                f"outflow requires non-positive Courant numbers, got "
                f"alpha={self.alpha}, beta={self.beta}"
            )
        if self.bound_m <= 0 or self.radius_eps <= 0:
            raise CflError("bound_m and radius_eps must be positive")

    @classmethod
    def from_speeds(cls, a: float, b: float, grid: GridSpec, **kwargs) -> "CflPair":
        return cls(alpha=grid.lam * a, beta=grid.mu * b, **kwargs)

    def speeds(self, grid: GridSpec) -> Tuple[float, float]:
        return self.alpha / grid.lam, self.beta / grid.mu

    @property
    def radius_sq(self) -> float:
        return self.alpha**2 + self.beta**2

    def comparable(self) -> bool:
        a, b = abs(self.alpha), abs(self.beta)
        return a <= self.bound_m * b and b <= self.bound_m * a

    def inside_cauchy_ball(self) -> bool:
        return self.radius_sq <= 0.5

    def inside_eps_ball(self) -> bool:
        return self.radius_sq <= self.radius_eps

    def check(self, mode: str = "strict") -> None:
        """Raise :class:`CflError` unless the pair is admissible for *mode*.

        ``strict`` enforces the hypotheses of the stability theorem
        (comparability and the epsilon ball); ``explore`` only enforces the
        whole-space CFL ball.
        """
        if self.alpha >= 0 or self.beta >= 0:
            raise CflError(
                f"both Courant numbers must be negative, got alpha={self.alpha}, beta={self.beta}"
            )
        if mode == "strict":
            if not self.comparable():
                raise CflError(
                    f"|alpha|={abs(self.alpha):g} and |beta|={abs(self.beta):g} "
                    f"are not comparable with M={self.bound_m:g}"
                )
            if not self.inside_eps_ball():
                raise CflError(
                    f"alpha^2 + beta^2 = {self.radius_sq:g} exceeds eps={self.radius_eps:g}"
                )
        elif mode == "explore":
            if not self.inside_cauchy_ball():
                raise CflError(f"alpha^2 + beta^2 = {self.radius_sq:g} exceeds 1/2")
        else:
            raise ValueError(f"unknown CFL mode: {mode!r}")

# }}}


# {{{ fields


@dataclass(frozen=True)
class Field1D:
    """Values ``u_j`` for ``j = -1, ..., nx`` stored in ``data[j + 1]``."""

    data: np.ndarray

    @classmethod
    def from_interior(cls, values) -> "Field1D":
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 1 or values.size < 2:
            raise ValueError("need a 1D array with at least two interior values")
        data = np.zeros(values.size + 2)
        data[1:-1] = values
        return fill_ghosts_1d(cls(data))

    @property
    def nx(self) -> int:
        return self.data.size - 2

    @property
    def interior(self) -> np.ndarray:
        return self.data[1:-1]

    def value(self, j: int) -> float:
        if not -1 <= j <= self.nx:
            raise IndexError(f"index j={j} outside stored range [-1, {self.nx}]")
        return float(self.data[j + 1])


@dataclass(frozen=True)
class Field2D:
    """Values ``u_{j,k}`` for ``(j, k)`` in ``{-1..nx} x {-1..ny}``.

    ``data[j + 1, k + 1]`` holds ``u_{j,k}``; the first axis is the
    ``x`` direction.
    """

    data: np.ndarray

    @classmethod
    def zeros(cls, nx: int, ny: int) -> "Field2D":
        return cls(np.zeros((nx + 2, ny + 2)))

    @classmethod
    def from_interior(cls, values) -> "Field2D":
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2 or min(values.shape) < 2:
            raise ValueError(f"need a 2D array with at least 2x2 interior values, got {values.shape}")
        data = np.zeros((values.shape[0] + 2, values.shape[1] + 2))
        data[1:-1, 1:-1] = values
        return fill_ghosts_2d(cls(data))

    @property
    def nx(self) -> int:
        return self.data.shape[0] - 2

    @property
    def ny(self) -> int:
        return self.data.shape[1] - 2

    @property
    def interior(self) -> np.ndarray:
        return self.data[1:-1, 1:-1]

    def value(self, j: int, k: int) -> float:
        if not (-1 <= j <= self.nx and -1 <= k <= self.ny):
            raise IndexError(
                f"index (j, k)=({j}, {k}) outside stored range [-1, {self.nx}] x [-1, {self.ny}]"
            )
        return float(self.data[j + 1, k + 1])

    def __add__(self, other: "Field2D") -> "Field2D":
        return Field2D(self.data + other.data)

    def __mul__(self, scalar: float) -> "Field2D":
        return Field2D(scalar * self.data)

    __rmul__ = __mul__


def fill_ghosts_1d(field: Field1D) -> Field1D:
    u = field.data.copy()
    u[0] = 2.0 * u[1] - u[2]
    u[-1] = 2.0 * u[-2] - u[-3]
    return Field1D(u)


def fill_ghosts_2d(field: Field2D) -> Field2D:
    """Second-order extrapolation into the ghost ring.

    Near the origin this is exactly the membership condition of the
    quarter-plane space: the two edge rules plus the corner rule
    ``u(-1,-1) = 4 u(0,0) - 2 u(1,0) - 2 u(0,1) + u(1,1)``. The far edges of
    the truncated box are closed by the mirrored rules.
    """
    u = field.data.copy()
    # edges, interior tangential range only
    u[0, 1:-1] = 2.0 * u[1, 1:-1] - u[2, 1:-1]
    u[-1, 1:-1] = 2.0 * u[-2, 1:-1] - u[-3, 1:-1]
    u[1:-1, 0] = 2.0 * u[1:-1, 1] - u[1:-1, 2]
    u[1:-1, -1] = 2.0 * u[1:-1, -2] - u[1:-1, -3]
    # corners, written out so the corner identity holds bit-for-bit
    for jg, j0, j1 in ((0, 1, 2), (-1, -2, -3)):
        for kg, k0, k1 in ((0, 1, 2), (-1, -2, -3)):
            u[jg, kg] = 4.0 * u[j0, k0] - 2.0 * u[j1, k0] - 2.0 * u[j0, k1] + u[j1, k1]
    return Field2D(u)


def _gauss_points(n: int, h: float) -> Tuple[np.ndarray, np.ndarray]:
    # two-point Gauss rule on every cell [i h, (i+1) h)
    off = 0.5 / np.sqrt(3.0)
    mid = (np.arange(n) + 0.5) * h
    return mid - off * h, mid + off * h


def project_initial_1d(u0: Callable, nx: int, dx: float) -> Field1D:
    xl, xr = _gauss_points(nx, dx)
    vals = 0.5 * (np.asarray(u0(xl), dtype=np.float64) + np.asarray(u0(xr), dtype=np.float64))
    vals = np.broadcast_to(vals, (nx,)).copy()
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        raise ValueError(f"initial data is not finite in cell j={bad[0]}")
    return Field1D.from_interior(vals)


def project_initial_2d(u0: Callable, grid: GridSpec) -> Field2D:
    """Cell averages of ``u0(x, y)`` by the tensor two-point Gauss rule.

    *u0* is called with broadcastable arrays. The rule is exact for data of
    degree at most three in each variable.
    """
    xs = _gauss_points(grid.nx, grid.dx)
    ys = _gauss_points(grid.ny, grid.dy)
    acc = np.zeros((grid.nx, grid.ny))
    for x in xs:
        for y in ys:
            acc = acc + np.broadcast_to(
                np.asarray(u0(x[:, None], y[None, :]), dtype=np.float64), acc.shape
            )
    vals = 0.25 * acc
    bad = np.argwhere(~np.isfinite(vals))
    if bad.size:
        j, k = bad[0]
        raise ValueError(f"initial data is not finite in cell (j, k)=({j}, {k})")
    return Field2D.from_interior(vals)


def check_far_support(data: np.ndarray, margin: int = 3, rtol: float = 0.0) -> None:
    """Raise :class:`SupportError` if *data* is nonzero near the far edges.

    *data* is a ghost-padded array (1D or 2D). Entries with interior index
    ``>= n - margin`` in any direction must vanish, up to ``rtol`` times the
    largest magnitude in the array.
    """
    scale = float(np.max(np.abs(data))) if data.size else 0.0
    limit = rtol * scale
    for axis in range(data.ndim):
        n = data.shape[axis] - 2
        band = np.take(data, np.arange(max(n - margin, 0) + 1, n + 2), axis=axis)
        if band.size and float(np.max(np.abs(band))) > limit:
            raise SupportError(
                f"field support reaches within {margin} cells of the far edge along axis {axis}"
            )

# }}}
