r"""
Stability-region maps
---------------------

Three classifications over the plane of ``(lambda |a|, mu |b|)``:

* ``corner``: the corner contribution as a quadratic form on
  ``(u00, D1+ u00, D2+ u00, D1+ D2+ u00)``;
* ``reduced``: the same form without the cross terms
  ``D1+ u00 * D1+ D2+ u00`` and ``D2+ u00 * D1+ D2+ u00``;
* ``boundary``: the whole-line boundary form, read through its Hermitian
  symbol ``H(xi)`` with ``x = sin^2(xi / 2)``.

Pixels outside the Cauchy ball ``alpha^2 + beta^2 <= 1/2`` get class 0; inside,
class 2 means negative definite and class 1 means it is not.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from lwquarter.core import CflPair

OUTSIDE, BAD, GOOD = 0, 1, 2
WHICH = ("corner", "reduced", "boundary")
ND_RTOL = 1e-12


# {{{ corner forms


@dataclass(frozen=True)
class QuadForm4:
    """Symmetric 4x4 matrix on ``(u00, D1+ u00, D2+ u00, D1+ D2+ u00)``."""

    m: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.m, dtype=np.float64)
        if m.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValueError("matrix is not symmetric")
        object.__setattr__(self, "m", m)

    def __call__(self, vec) -> float:
        vec = np.asarray(vec, dtype=np.float64)
        return float(vec @ self.m @ vec)


def _corner_matrices(a: np.ndarray, b: np.ndarray, reduced: bool) -> np.ndarray:
    # a = |alpha|, b = |beta|; returns shape a.shape + (4, 4)
    a2, b2 = a * a, b * b
    r2 = a2 + b2
    m = np.zeros(np.shape(a) + (4, 4))
    m[..., 0, 0] = a * b - 0.5 * (a + b)
    m[..., 1, 1] = -(0.25 * a**3 + 0.5 * a2 * b)
    m[..., 2, 2] = -(0.25 * b**3 + 0.5 * a * b2)
    m[..., 3, 3] = -3.0 * r2 / 16.0 - (a + b) * r2 / 8.0 - r2 * r2 / 16.0
    off = {
        (0, 1): -0.25 * a2,
        (0, 2): -0.25 * b2,
        (1, 2): -0.25 * a * b * (a + b),
        (0, 3): -0.125 * r2,
    }
    if not reduced:
        off[(1, 3)] = off[(2, 3)] = -0.125 * r2
    for (i, j), val in off.items():
        m[..., i, j] = val
        m[..., j, i] = val
    return m


def corner_form(cfl: CflPair) -> QuadForm4:
    return QuadForm4(_corner_matrices(np.float64(abs(cfl.alpha)), np.float64(abs(cfl.beta)), False))


def reduced_corner_form(cfl: CflPair) -> QuadForm4:
    """Corner form with the ``(D1+, D1+D2+)`` and ``(D2+, D1+D2+)`` couplings removed."""
    return QuadForm4(_corner_matrices(np.float64(abs(cfl.alpha)), np.float64(abs(cfl.beta)), True))


def _nd_eig(m: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    scale = np.max(np.abs(m), axis=(-2, -1))
    eig = np.linalg.eigvalsh(m)
    return np.all(eig < -ND_RTOL * scale[..., None], axis=-1) & (scale > 0)


def negative_definite_by_minors(m: np.ndarray) -> np.ndarray:
    """Sylvester test: ``(-1)^k det(M_k) > 0`` for every leading block."""
    m = np.asarray(m, dtype=np.float64)
    ok = np.ones(m.shape[:-2], dtype=bool)
    for k in range(1, m.shape[-1] + 1):
        ok &= (-1.0) ** k * np.linalg.det(m[..., :k, :k]) > 0.0
    return ok


def is_negative_definite_4(q: QuadForm4) -> bool:
    """Eigenvalues below ``-1e-12 * max|m|``, confirmed by the minor test.

    Disagreement only happens within round-off of the semidefinite border and
    is classified as not definite.
    """
    m = q.m if isinstance(q, QuadForm4) else QuadForm4(q).m
    return bool(_nd_eig(m) & negative_definite_by_minors(m))

# }}}


# {{{ boundary symbol


@dataclass(frozen=True)
class HermSymbol2:
    """``H = [[h11, off_re + i off_im], [off_re - i off_im, h22]]``."""

    h11: float
    h22: float
    off_re: float
    off_im: float
    x: float

    @property
    def trace(self) -> float:
        return self.h11 + self.h22

    @property
    def det(self) -> float:
        return self.h11 * self.h22 - (self.off_re**2 + self.off_im**2)

    def matrix(self) -> np.ndarray:
        h12 = complex(self.off_re, self.off_im)
        return np.array([[self.h11, h12], [h12.conjugate(), self.h22]])


def _symbol_entries(a, b, x, s):
    a2, b2 = a * a, b * b
    r2 = a2 + b2
    h11 = -b * (1.0 + 2.0 * a2 * x) - 2.0 * a2 * (1.0 - b) ** 2 * x * x
    h22 = -0.5 * b**3 - 0.5 * (1.0 + b - b2) * r2 * x - 2.0 * a2 * b2 * x * x
    off_re = -0.5 * b2 - 0.5 * r2 * x - a2 * r2 * x * x
    off_im = s * (0.5 * a * b2 + 0.5 * a * r2 * x - 2.0 * a**3 * b * x)
    return h11, h22, off_re, off_im


def boundary_symbol(cfl: CflPair, x: float, sin_xi: float) -> HermSymbol2:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x = sin^2(xi/2) must lie in [0, 1], got {x}")
    h = _symbol_entries(abs(cfl.alpha), abs(cfl.beta), float(x), float(sin_xi))
    return HermSymbol2(*(float(t) for t in h), x=float(x))


def _boundary_negdef(a: np.ndarray, b: np.ndarray, samples: int) -> np.ndarray:
    # a, b: 1D arrays of |alpha|, |beta|; determinant and trace only depend on x
    x = np.linspace(0.0, 1.0, samples)[None, :]
    s = np.sqrt(4.0 * x * (1.0 - x))
    h11, h22, re, im = _symbol_entries(a[:, None], b[:, None], x, s)
    trace = h11 + h22
    det = h11 * h22 - (re * re + im * im)
    scale = np.max(np.abs(h11) + np.abs(h22) + np.hypot(re, im), axis=1, keepdims=True)
    tol = ND_RTOL * scale * scale
    return np.all((trace < 0.0) & (det > tol), axis=1) & (scale[:, 0] > 0)


def boundary_negdef_all_xi(cfl: CflPair, samples: int = 256) -> bool:
    """Negative definiteness of ``H`` on a uniform grid of ``x`` in ``[0, 1]``."""
    if samples < 64:
        raise ValueError(f"need at least 64 samples, got {samples}")
    res = _boundary_negdef(np.array([abs(cfl.alpha)]), np.array([abs(cfl.beta)]), samples)
    return bool(res[0])


def whole_line_boundary_form(u, v, cfl: CflPair) -> float:
    """Direct evaluation of the whole-line boundary form on finitely supported ``u, v``.

    Both sequences are extended by zeros on both sides before the sums.
    """
    u = np.pad(np.asarray(u, dtype=np.float64), 2)
    v = np.pad(np.asarray(v, dtype=np.float64), 2)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError("u and v must be 1D sequences of equal length")
    a, b = abs(cfl.alpha), abs(cfl.beta)
    a2, b2 = a * a, b * b
    r2 = a2 + b2

    def dp(f):
        return f[1:] - f[:-1]

    def d0(f):
        return 0.5 * (f[2:] - f[:-2])

    def lap(f):
        return f[2:] - 2.0 * f[1:-1] + f[:-2]

    S = np.sum
    return float(
        -b * S(u * u)
        - 0.5 * b**3 * S(v * v)
        - 0.5 * a2 * b * S(dp(u) ** 2)
        - 0.125 * a2 * (1.0 - b) ** 2 * S(lap(u) ** 2)
        - b2 * S(u * v)
        - a * b2 * S(d0(u) * v[1:-1])
        - 0.125 * a2 * b2 * S(lap(v) ** 2)
        + 0.25 * a * r2 * S(d0(u) * lap(v))
        - 0.125 * (1.0 + b - b2) * r2 * S(dp(v) ** 2)
        - 0.25 * r2 * S(dp(u) * dp(v))
        - 0.125 * a2 * r2 * S(lap(u) * lap(v))
        + a**3 * b * S(lap(u) * d0(v))
    )


def boundary_form_via_symbol(u, v, cfl: CflPair, n: int = 0) -> float:
    """The same form through ``H(xi)`` and the discrete Fourier transform.

    The sequences are zero padded to a period ``n`` long enough that no stencil
    wraps around, which makes the discrete Parseval relation exact.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    n = max(n, u.size + 4)
    uh, vh = np.fft.fft(u, n), np.fft.fft(v, n)
    xi = 2.0 * np.pi * np.arange(n) / n
    x = np.sin(0.5 * xi) ** 2
    h11, h22, re, im = _symbol_entries(abs(cfl.alpha), abs(cfl.beta), x, np.sin(xi))
    h12 = re + 1j * im
    q = h11 * np.abs(uh) ** 2 + h22 * np.abs(vh) ** 2 + 2.0 * np.real(np.conj(uh) * h12 * vh)
    return float(np.sum(q) / n)

# }}}


# {{{ sweeps


@dataclass(frozen=True)
class RegionMap:
    """Per-pixel classes; ``classes[i, j]`` sits at ``((i + 0.5)/R, (j + 0.5)/R)``."""

    which: str
    classes: np.ndarray

    @property
    def resolution(self) -> int:
        return self.classes.shape[0]

    @property
    def centers(self) -> np.ndarray:
        return (np.arange(self.resolution) + 0.5) / self.resolution

    def counts(self) -> Tuple[int, int, int]:
        return tuple(int(np.sum(self.classes == c)) for c in (OUTSIDE, BAD, GOOD))

    def pixel(self, la: float, mb: float) -> Tuple[int, int]:
        r = self.resolution
        clip = lambda t: min(max(int(np.floor(t * r)), 0), r - 1)  # noqa: E731
        return clip(la), clip(mb)

    def at(self, la: float, mb: float) -> int:
        return int(self.classes[self.pixel(la, mb)])


def sweep(resolution: int, which: str, samples: int = 256, chunk: int = 4096) -> RegionMap:
    if resolution < 16:
        raise ValueError(f"resolution must be at least 16, got {resolution}")
    if which not in WHICH:
        raise ValueError(f"unknown sweep {which!r}; choose from {WHICH}")
    c = (np.arange(resolution) + 0.5) / resolution
    la, mb = np.meshgrid(c, c, indexing="ij")
    classes = np.full(la.shape, OUTSIDE, dtype=np.uint8)
    inside = la * la + mb * mb <= 0.5
    a, b = la[inside], mb[inside]
    good = np.empty(a.shape, dtype=bool)
    for lo in range(0, a.size, chunk):
        sl = slice(lo, lo + chunk)
        if which == "boundary":
            good[sl] = _boundary_negdef(a[sl], b[sl], samples)
        else:
            m = _corner_matrices(a[sl], b[sl], which == "reduced")
            good[sl] = _nd_eig(m) & negative_definite_by_minors(m)
    classes[inside] = np.where(good, GOOD, BAD)
    return RegionMap(which=which, classes=classes)

# }}}
