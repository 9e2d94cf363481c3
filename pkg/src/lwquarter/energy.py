r"""
Weighted energy and the one-step energy balance
-----------------------------------------------

The weighted norm on the quarter-plane is

.. math::

    \|u\|^2 = \sum_{j,k \ge 1} u_{j,k}^2 + \frac12 \sum_{k \ge 1} u_{0,k}^2
        + \frac12 \sum_{j \ge 1} u_{j,0}^2 + \frac14 u_{0,0}^2 .

With ``u^{n+1} = u - w + v`` the increment splits exactly as

.. math::

    \|u^{n+1}\|^2 - \|u\|^2 = 2\langle u; v\rangle - 2\langle v; w\rangle
        + \|v\|^2 - 2\langle u; w\rangle + \|w\|^2 .

The verifiers below evaluate each scalar product directly and, separately,
through its closed form in boundary, corner and interior sums. Closed forms
are returned itemized so a sign slip shows up as a single term.

All sums over the infinite index sets are truncated to the stored box. The
verifiers refuse fields whose support comes within three cells of the far
edges, which makes the truncation exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from lwquarter.core import CflPair, Field2D, check_far_support
from lwquarter.scheme2d import compute_v, compute_w, step_2d
from lwquarter.stencils import compose

SUPPORT_MARGIN = 3


def _total(x, compensated: bool = False) -> float:
    x = np.asarray(x, dtype=np.float64)
    if np.isnan(x).any():
        raise RuntimeError("sum touches an entry whose stencil leaves storage")
    if compensated:
        return math.fsum(x.ravel())
    return float(np.sum(x))


def _weights(shape: Tuple[int, int]) -> np.ndarray:
    wgt = np.ones(shape)
    wgt[0, :] *= 0.5
    wgt[:, 0] *= 0.5
    return wgt


def _interior(u) -> np.ndarray:
    return u.interior if isinstance(u, Field2D) else np.asarray(u, dtype=np.float64)


def inner(u, v, compensated: bool = False) -> float:
    """Weighted scalar product of two interior arrays (or fields)."""
    u, v = _interior(u), _interior(v)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch: {u.shape} != {v.shape}")
    return _total(_weights(u.shape) * u * v, compensated)


def norm_sq(u, compensated: bool = False) -> float:
    u = _interior(u)
    return _total(_weights(u.shape) * u * u, compensated)


# {{{ index classes of a padded array


def _bj(p: np.ndarray) -> np.ndarray:
    """Boundary row ``{k = 0, j >= 1}``."""
    return p[2:-1, 1]


def _bk(p: np.ndarray) -> np.ndarray:
    """Boundary column ``{j = 0, k >= 1}``."""
    return p[1, 2:-1]


def _c(p: np.ndarray) -> float:
    return float(p[1, 1])


def _o(p: np.ndarray) -> np.ndarray:
    """Strict interior ``{j, k >= 1}``."""
    return p[2:-1, 2:-1]


class _Ops:
    """Lazily evaluated stencil composites of one padded array."""

    def __init__(self, data: np.ndarray):
        self._u = data
        self._cache: Dict[Tuple[str, ...], np.ndarray] = {}

    def __call__(self, *tags: str) -> np.ndarray:
        if not tags:
            return self._u
        if tags not in self._cache:
            self._cache[tags] = compose(tags, self._u)
        return self._cache[tags]


def _prepare(u: Field2D, check_support: bool) -> _Ops:
    if check_support:
        check_far_support(u.data, margin=SUPPORT_MARGIN)
    return _Ops(u.data)


def _dirty_sum(s: _Ops, compensated: bool) -> float:
    """``|D1- D2- u|^2 + |D1- D2+ u|^2 + |D1+ D2- u|^2 + |D1+ D2+ u|^2`` on the strict interior."""
    return sum(
        _total(_o(s(p, q)) ** 2, compensated)
        for p in ("D1-", "D1+")
        for q in ("D2-", "D2+")
    )

# }}}


# {{{ lemma verifiers


@dataclass
class IdentityCheck:
    lhs: float
    rhs: float
    terms: Dict[str, float] = field(default_factory=dict)

    @property
    def residual(self) -> float:
        return self.lhs - self.rhs

    @property
    def relative_residual(self) -> float:
        return abs(self.residual) / (1.0 + abs(self.lhs))


def _abs_ab(cfl: CflPair) -> Tuple[float, float, float, float]:
    a, b = abs(cfl.alpha), abs(cfl.beta)
    return a, b, a * a, b * b


def skew_terms(u: Field2D, cfl: CflPair, check_support: bool = True, compensated: bool = False):
    """Closed forms of ``2<u;v>`` and ``-2<v;w>`` as itemized dicts."""
    s = _prepare(u, check_support)
    a, b, a2, b2 = _abs_ab(cfl)
    r2 = a2 + b2
    T = lambda x: _total(x, compensated)  # noqa: E731

    uu = s()
    first = {
        "edge_k": -a * T(_bk(uu) ** 2),
        "edge_j": -b * T(_bj(uu) ** 2),
        "corner": -0.5 * (a + b) * _c(uu) ** 2,
    }

    d1p, d2p = s("D1+"), s("D2+")
    d12 = s("D1+", "D2+")
    p, q, r = _c(d1p), _c(d2p), _c(d12)
    second = {
        "k_D1p_sq": -0.5 * a**3 * T(_bk(d1p) ** 2),
        "j_D2p_sq": -0.5 * b**3 * T(_bj(d2p) ** 2),
        "k_D2p_sq": -0.5 * a * b2 * T(_bk(d2p) ** 2),
        "j_D1p_sq": -0.5 * a2 * b * T(_bj(d1p) ** 2),
        "k_LAP2_sq": 0.25 * a * b2 * T(_bk(s("LAP2")) ** 2),
        "j_LAP1_sq": 0.25 * a2 * b * T(_bj(s("LAP1")) ** 2),
        "k_D20_D1p": -a2 * b * T(_bk(s("D2_0")) * _bk(d1p)),
        "j_D10_D2p": -a * b2 * T(_bj(s("D1_0")) * _bj(d2p)),
        "k_D1pD2p_sq": -a * r2 / 8.0 * T(_bk(d12) ** 2),
        "j_D1pD2p_sq": -b * r2 / 8.0 * T(_bj(d12) ** 2),
        "k_D20_D1pLAP2": b * r2 / 4.0 * T(_bk(s("D2_0")) * _bk(s("D1+", "LAP2"))),
        "j_D10_D2pLAP1": a * r2 / 4.0 * T(_bj(s("D1_0")) * _bj(s("D2+", "LAP1"))),
        "c_D1p_sq_cubic": -0.25 * a**3 * p * p,
        "c_D2p_sq_cubic": -0.25 * b**3 * q * q,
        "c_D1pD2p_sq": -(a + b) * r2 / 8.0 * r * r,
        "c_D1p_sq": -0.5 * a2 * b * p * p,
        "c_D2p_sq": -0.5 * a * b2 * q * q,
        "c_D1p_D2p": -0.5 * a * b * (a + b) * p * q,
    }
    return first, second


def lemma1_verify(
    u: Field2D, cfl: CflPair, check_support: bool = True, compensated: bool = False
) -> Tuple[IdentityCheck, IdentityCheck]:
    """Skew-symmetric terms: ``2<u;v>`` and ``-2<v;w>`` against their closed forms.

    Ghost values are used as given. A field outside the extrapolation space
    makes the closed forms wrong, which is what the negative-control audit
    relies on.
    """
    first, second = skew_terms(u, cfl, check_support, compensated)
    v, w = compute_v(u, cfl), compute_w(u, cfl)
    lhs1 = 2.0 * inner(u, v, compensated)
    lhs2 = -2.0 * inner(v, w, compensated)
    return (
        IdentityCheck(lhs1, sum(first.values()), first),
        IdentityCheck(lhs2, sum(second.values()), second),
    )


def symmetric_terms(u: Field2D, cfl: CflPair, check_support: bool = True, compensated: bool = False):
    """Closed form of ``|v|^2 - 2<u;w>`` as an itemized dict."""
    s = _prepare(u, check_support)
    a, b, a2, b2 = _abs_ab(cfl)
    r2 = a2 + b2
    T = lambda x: _total(x, compensated)  # noqa: E731

    uu, d1p, d2p, d12 = s(), s("D1+"), s("D2+"), s("D1+", "D2+")
    u00, p, q, r = _c(uu), _c(d1p), _c(d2p), _c(d12)
    return {
        "o_LAP1_sq": -0.25 * a2 * T(_o(s("LAP1")) ** 2),
        "o_LAP2_sq": -0.25 * b2 * T(_o(s("LAP2")) ** 2),
        "o_mixed_sq": -r2 / 16.0 * _dirty_sum(s, compensated),
        "j_LAP1_sq": -a2 / 8.0 * T(_bj(s("LAP1")) ** 2),
        "k_LAP2_sq": -b2 / 8.0 * T(_bk(s("LAP2")) ** 2),
        "k_u_D1p": -a2 * T(_bk(uu) * _bk(d1p)),
        "j_u_D2p": -b2 * T(_bj(uu) * _bj(d2p)),
        "j_D1pD2p_sq": -r2 / 8.0 * T(_bj(d12) ** 2),
        "k_D1pD2p_sq": -r2 / 8.0 * T(_bk(d12) ** 2),
        "j_D1p_D1pD2p": -r2 / 4.0 * T(_bj(d1p) * _bj(d12)),
        "k_D2p_D1pD2p": -r2 / 4.0 * T(_bk(d2p) * _bk(d12)),
        "c_u_sq": a * b * u00 * u00,
        "c_u_D1p": -0.5 * a2 * u00 * p,
        "c_u_D2p": -0.5 * b2 * u00 * q,
        "c_sum_D1pD2p": -0.25 * r2 * (u00 + p + q) * r,
        "c_D1pD2p_sq": -3.0 * r2 / 16.0 * r * r,
    }


def lemma2_verify(
    u: Field2D, cfl: CflPair, check_support: bool = True, compensated: bool = False
) -> IdentityCheck:
    terms = symmetric_terms(u, cfl, check_support, compensated)
    v, w = compute_v(u, cfl), compute_w(u, cfl)
    lhs = norm_sq(v, compensated) - 2.0 * inner(u, w, compensated)
    return IdentityCheck(lhs, sum(terms.values()), terms)


def w_bound_terms(u: Field2D, cfl: CflPair, check_support: bool = True, compensated: bool = False):
    """Upper bound for ``|w|^2``, itemized by term group."""
    s = _prepare(u, check_support)
    a, b, a2, b2 = _abs_ab(cfl)
    r2 = a2 + b2
    T = lambda x: _total(x, compensated)  # noqa: E731

    lap1, lap2 = s("LAP1"), s("LAP2")
    d2p_lap1, d1p_lap2 = s("D2+", "LAP1"), s("D1+", "LAP2")
    d12 = s("D1+", "D2+")
    r = _c(d12)
    interior = a2 / 4.0 * T(_o(lap1) ** 2) + b2 / 4.0 * T(_o(lap2) ** 2) + r2 / 16.0 * _dirty_sum(
        s, compensated
    )
    return {
        "interior": 2.0 * r2 * interior,
        "j_LAP1_sq": -a2 * b2 / 8.0 * T(_bj(lap1) ** 2),
        "k_LAP2_sq": -a2 * b2 / 8.0 * T(_bk(lap2) ** 2),
        "j_D2pLAP1_sq": -a2 * b2 / 8.0 * T(_bj(d2p_lap1) ** 2),
        "k_D1pLAP2_sq": -a2 * b2 / 8.0 * T(_bk(d1p_lap2) ** 2),
        "j_LAP1_D2pLAP1": -a2 * r2 / 8.0 * T(_bj(lap1) * _bj(d2p_lap1)),
        "k_LAP2_D1pLAP2": -b2 * r2 / 8.0 * T(_bk(lap2) * _bk(d1p_lap2)),
        "edges_D1pD2p_sq": r2 / 8.0 * (b2 * T(_bj(d12) ** 2) + a2 * T(_bk(d12) ** 2)),
        "j_LAP1_D2pD10": a**3 * b * T(_bj(lap1) * _bj(s("D2+", "D1_0"))),
        "k_LAP2_D1pD20": a * b**3 * T(_bk(lap2) * _bk(s("D1+", "D2_0"))),
        "c_D1pD2p_sq": -(r2**2) / 16.0 * r * r,
    }


@dataclass
class InequalityCheck:
    lhs: float
    bound: float
    terms: Dict[str, float] = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.bound - self.lhs

    def holds(self, rtol: float = 1e-12) -> bool:
        return self.slack >= -rtol * (1.0 + abs(self.bound))


def lemma3_verify(
    u: Field2D, cfl: CflPair, check_support: bool = True, compensated: bool = False
) -> InequalityCheck:
    terms = w_bound_terms(u, cfl, check_support, compensated)
    return InequalityCheck(norm_sq(compute_w(u, cfl), compensated), sum(terms.values()), terms)

# }}}


# {{{ interior / boundary / corner decomposition


def interior_term(u: Field2D, cfl: CflPair, check_support: bool = True, compensated: bool = False) -> float:
    s = _prepare(u, check_support)
    a2, b2 = cfl.alpha**2, cfl.beta**2
    r2 = a2 + b2
    T = lambda x: _total(x, compensated)  # noqa: E731
    brace = a2 / 4.0 * T(_o(s("LAP1")) ** 2) + b2 / 4.0 * T(_o(s("LAP2")) ** 2) + r2 / 16.0 * _dirty_sum(
        s, compensated
    )
    return (-1.0 + 2.0 * r2) * brace


def _boundary_items(s: _Ops, a: float, b: float, side: str, compensated: bool) -> Dict[str, float]:
    """Boundary contribution on ``{k = 0, j >= 1}`` (``side="j"``).

    ``side="k"`` evaluates the mirror term on ``{j = 0, k >= 1}``; pass the
    Courant magnitudes already swapped.
    """
    T = lambda x: _total(x, compensated)  # noqa: E731
    if side == "j":
        sel, dn, dt, dt0, lapt = _bj, "D2+", "D1+", "D1_0", "LAP1"
    else:
        sel, dn, dt, dt0, lapt = _bk, "D1+", "D2+", "D2_0", "LAP2"
    a2, b2 = a * a, b * b
    r2 = a2 + b2
    uu = s()
    normal = s(dn)
    tang = s(dt)
    tang0 = s(dt0)
    lap = s(lapt)
    mixed = s("D1+", "D2+")
    n_lap = s(dn, lapt)
    return {
        "u_sq": -b * T(sel(uu) ** 2),
        "normal_sq": -0.5 * b**3 * T(sel(normal) ** 2),
        "tangential_sq": -0.5 * a2 * b * T(sel(tang) ** 2),
        "lap_sq": -a2 * (1.0 - b) ** 2 / 8.0 * T(sel(lap) ** 2),
        "u_normal": -b2 * T(sel(uu) * sel(normal)),
        "central_normal": -a * b2 * T(sel(tang0) * sel(normal)),
        "normal_lap_sq": -a2 * b2 / 8.0 * T(sel(n_lap) ** 2),
        "central_normal_lap": a * r2 / 4.0 * T(sel(tang0) * sel(n_lap)),
        "mixed_sq": -(1.0 + b - b2) * r2 / 8.0 * T(sel(mixed) ** 2),
        "tangential_mixed": -r2 / 4.0 * T(sel(tang) * sel(mixed)),
        "lap_normal_lap": -a2 * r2 / 8.0 * T(sel(lap) * sel(n_lap)),
        "lap_normal_central": a**3 * b * T(sel(lap) * sel(s(dn, dt0))),
    }


def boundary_terms(u: Field2D, cfl: CflPair, check_support: bool = True, compensated: bool = False):
    """Itemized boundary contributions ``(B1, B2)`` on ``{k=0, j>=1}`` and ``{j=0, k>=1}``."""
    s = _prepare(u, check_support)
    a, b = abs(cfl.alpha), abs(cfl.beta)
    return _boundary_items(s, a, b, "j", compensated), _boundary_items(s, b, a, "k", compensated)


def corner_terms(u: Field2D, cfl: CflPair) -> Dict[str, float]:
    """Corner contribution evaluated on ``(u00, D1+ u00, D2+ u00, D1+ D2+ u00)``."""
    s = _Ops(u.data)
    return corner_value_terms(
        (_c(s()), _c(s("D1+")), _c(s("D2+")), _c(s("D1+", "D2+"))), cfl
    )


def corner_value_terms(vec, cfl: CflPair, reduced: bool = False) -> Dict[str, float]:
    """Itemized corner quadratic form on the vector ``(u00, p, q, r)``.

    ``p = D1+ u00``, ``q = D2+ u00``, ``r = D1+ D2+ u00``. With *reduced*
    the two cross terms ``p r`` and ``q r`` are dropped.
    """
    u00, p, q, r = (float(x) for x in vec)
    a, b = abs(cfl.alpha), abs(cfl.beta)
    a2, b2 = a * a, b * b
    r2 = a2 + b2
    cross = u00 if reduced else (u00 + p + q)
    return {
        "u_sq": (a * b - 0.5 * (a + b)) * u00 * u00,
        "p_sq": -(0.25 * a**3 + 0.5 * a2 * b) * p * p,
        "q_sq": -(0.25 * b**3 + 0.5 * a * b2) * q * q,
        "u_p": -0.5 * a2 * u00 * p,
        "u_q": -0.5 * b2 * u00 * q,
        "p_q": -0.5 * a * b * (a + b) * p * q,
        "cross_r": -0.25 * r2 * cross * r,
        "r_sq_lemma2": -3.0 * r2 / 16.0 * r * r,
        "r_sq_lemma1": -(a + b) * r2 / 8.0 * r * r,
        "r_sq_lemma3": -(r2**2) / 16.0 * r * r,
    }


@dataclass
class EnergyBreakdown:
    interior_I: float
    boundary_B1: float
    boundary_B2: float
    corner_C: float
    increment: float
    skew1: float
    skew2: float
    sym_vw: float
    w_norm_sq: float
    w_bound: float
    items: Dict[str, Dict[str, float]] = field(default_factory=dict, repr=False)

    @property
    def estimate(self) -> float:
        return self.interior_I + self.boundary_B1 + self.boundary_B2 + self.corner_C

    @property
    def split_residual(self) -> float:
        return self.increment - (self.skew1 + self.skew2 + self.sym_vw + self.w_norm_sq)

    @property
    def scale(self) -> float:
        return 1.0 + max(abs(self.increment), abs(self.skew1), abs(self.skew2), abs(self.sym_vw), self.w_norm_sq)


def breakdown(
    u: Field2D, cfl: CflPair, check_support: bool = True, compensated: bool = False
) -> EnergyBreakdown:
    """Every piece of the one-step energy balance for the transition ``u -> step(u)``."""
    if check_support:
        check_far_support(u.data, margin=SUPPORT_MARGIN)
    v, w = compute_v(u, cfl), compute_w(u, cfl)
    new = step_2d(u, cfl, mode=None)
    b1, b2 = boundary_terms(u, cfl, False, compensated)
    corner = corner_terms(u, cfl)
    return EnergyBreakdown(
        interior_I=interior_term(u, cfl, False, compensated),
        boundary_B1=sum(b1.values()),
        boundary_B2=sum(b2.values()),
        corner_C=sum(corner.values()),
        increment=norm_sq(new, compensated) - norm_sq(u, compensated),
        skew1=2.0 * inner(u, v, compensated),
        skew2=-2.0 * inner(v, w, compensated),
        sym_vw=norm_sq(v, compensated) - 2.0 * inner(u, w, compensated),
        w_norm_sq=norm_sq(w, compensated),
        w_bound=sum(w_bound_terms(u, cfl, False, compensated).values()),
        items={"B1": b1, "B2": b2, "C": corner},
    )

# }}}


# {{{ stability estimate


def theorem_dissipation(u: Field2D, cfl: CflPair, c: float = 0.1, compensated: bool = False) -> float:
    """Dissipation controlled by the stability estimate, scaled by *c*."""
    s = _Ops(u.data)
    a, b = abs(cfl.alpha), abs(cfl.beta)
    T = lambda x: _total(x, compensated)  # noqa: E731
    uu = s()
    return c * (
        a * a * T(_o(s("LAP1")) ** 2)
        + b * b * T(_o(s("LAP2")) ** 2)
        + a * T(uu[1, 1:-1] ** 2)
        + b * T(uu[1:-1, 1] ** 2)
    )


@dataclass
class TheoremReport:
    lhs: List[float]
    norms: List[float]
    tol: float
    claimed: bool
    c: float

    @property
    def max_lhs(self) -> float:
        return max(self.lhs) if self.lhs else 0.0

    @property
    def passed(self) -> bool:
        return self.max_lhs <= self.tol

    @property
    def monotone(self) -> bool:
        return all(b <= a + self.tol for a, b in zip(self.norms, self.norms[1:]))


def theorem1_check(
    u0: Field2D,
    cfl: CflPair,
    steps: int,
    c: float = 0.1,
    mode: str = "strict",
    far_rtol: float = 1e-13,
    compensated: bool = False,
) -> TheoremReport:
    """Evaluate the stability estimate along a trajectory.

    For each step the quantity
    ``|u^{n+1}|^2 - |u^n|^2 + c * (dissipation of u^n)`` must be
    non-positive. In ``"strict"`` mode the Courant pair must satisfy the
    theorem's hypotheses; ``"explore"`` only requires the Cauchy CFL ball and
    the report is marked as not claimed.

    The far-edge band must stay below ``far_rtol`` times the field's maximum
    magnitude, for the initial data and along the run. Gaussian tails and
    numerical tails that reach it are far below the tolerance.
    """
    cfl.check(mode)
    check_far_support(u0.data, margin=SUPPORT_MARGIN, rtol=far_rtol)
    tol = 1e-12 * (1.0 + norm_sq(u0, compensated))
    lhs, norms = [], [norm_sq(u0, compensated)]
    u = u0
    for _ in range(steps):
        new = step_2d(u, cfl, mode=None)
        check_far_support(new.data, margin=SUPPORT_MARGIN, rtol=far_rtol)
        norms.append(norm_sq(new, compensated))
        lhs.append(norms[-1] - norms[-2] + theorem_dissipation(u, cfl, c, compensated))
        u = new
    return TheoremReport(lhs=lhs, norms=norms, tol=tol, claimed=(mode == "strict"), c=c)

# }}}
