"""
Command-line driver
-------------------

Subcommands::

    lwquarter simulate   run the 2D scheme and write a per-step energy CSV
    lwquarter audit      check the energy identities on seeded random fields
    lwquarter sweep      classify the CFL plane and write CSV and PGM maps
    lwquarter converge   grid refinement study against the exact solution

Exit codes: 0 success, 1 check failed, 2 CFL rejected, 64 bad usage,
65 bad input data or a bump that leaves the domain, 73 unwritable output.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from lwquarter.core import (
    CflError,
    CflPair,
    Field2D,
    GridSpec,
    SupportError,
    check_far_support,
    project_initial_2d,
)
from lwquarter.energy import (
    SUPPORT_MARGIN,
    breakdown,
    lemma1_verify,
    lemma2_verify,
    lemma3_verify,
    norm_sq,
    theorem_dissipation,
)
from lwquarter.regions import WHICH, RegionMap, sweep
from lwquarter.scheme2d import NonFiniteError, step_2d

EX_OK, EX_FAIL, EX_CFL, EX_USAGE, EX_DATAERR, EX_CANTCREAT = 0, 1, 2, 64, 65, 73

AUDIT_PAIRS = [
    (-0.1, -0.1), (-0.3, -0.2), (-0.2, -0.3), (-0.4, -0.4), (-0.05, -0.05),
    (-0.1, -0.07), (-0.07, -0.1), (-0.5, -0.3), (-0.3, -0.5), (-0.02, -0.04),
]
PGM_LEVELS = {0: 0, 1: 128, 2: 255}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _open_out(path: str):
    try:
        return open(path, "w", encoding="ascii", newline="")
    except OSError as exc:
        raise _Unwritable(path, exc) from exc


class _Unwritable(Exception):
    def __init__(self, path, exc):
        super().__init__(f"cannot write {path}: {exc.strerror or exc}")


# {{{ simulate


def _initial_condition(args, grid: GridSpec) -> Field2D:
    nx, ny = grid.nx, grid.ny
    if args.ic == "zero":
        return Field2D.zeros(nx, ny)
    if args.ic == "spike":
        vals = np.zeros((nx, ny))
        j, k = args.center if args.center else (2, 2)
        if not (0 <= j < nx and 0 <= k < ny):
            raise UsageError(f"spike position ({j}, {k}) outside the grid")
        vals[int(j), int(k)] = 1.0
        return Field2D.from_interior(vals)
    if args.ic == "gaussian":
        cj, ck = args.center if args.center else (nx / 4.0, ny / 4.0)
        width = args.width if args.width else max(nx, ny) / 16.0
        x0, y0 = cj * grid.dx, ck * grid.dy
        sx, sy = width * grid.dx, width * grid.dy

        def g(x, y):
            return np.exp(-0.5 * (((x - x0) / sx) ** 2 + ((y - y0) / sy) ** 2))

        return project_initial_2d(g, grid)
    # file
    if not args.ic_file:
        raise UsageError("--ic file needs --ic-file PATH")
    try:
        with open(args.ic_file, encoding="ascii") as fh:
            vals = np.array(fh.read().split(), dtype=np.float64)
    except OSError as exc:
        raise UsageError(f"cannot read {args.ic_file}: {exc.strerror}") from exc
    except ValueError as exc:
        raise _DataError(f"{args.ic_file}: {exc}") from exc
    if vals.size != nx * ny:
        raise _DataError(f"{args.ic_file}: expected {nx * ny} values, found {vals.size}")
    if not np.all(np.isfinite(vals)):
        raise _DataError(f"{args.ic_file}: non-finite value at position {int(np.argmin(np.isfinite(vals)))}")
    return Field2D.from_interior(vals.reshape(nx, ny))


class _DataError(Exception):
    pass


def cmd_simulate(args) -> int:
    grid = GridSpec(args.nx, args.ny, args.dx, args.dy, args.dt)
    grid.require_2d()
    cfl = CflPair.from_speeds(args.a, args.b, grid, bound_m=args.M, radius_eps=args.eps)
    cfl.check(args.mode)
    u = _initial_condition(args, grid)
    print(f"seed={args.seed} alpha={_fmt(cfl.alpha)} beta={_fmt(cfl.beta)} mode={args.mode}")
    tol = 1e-12 * (1.0 + norm_sq(u))
    worst = -math.inf
    header = "step,norm_sq,increment,I,B1,B2,C,theorem_lhs\n"
    with _open_out(args.out) as fh:
        fh.write(header)
        for n in range(args.steps):
            bd = breakdown(u, cfl, check_support=False)
            lhs = bd.increment + theorem_dissipation(u, cfl, args.c)
            worst = max(worst, lhs)
            row = [norm_sq(u), bd.increment, bd.interior_I, bd.boundary_B1,
                   bd.boundary_B2, bd.corner_C, lhs]
            fh.write(",".join([str(n)] + [_fmt(x) for x in row]) + "\n")
            u = step_2d(u, cfl, mode=None)
            if not np.all(np.isfinite(u.data)):
                raise NonFiniteError(f"non-finite value after step {n + 1}")
    try:
        check_far_support(u.data, margin=SUPPORT_MARGIN, rtol=1e-13)
    except SupportError as exc:
        print(f"warning: {exc}; truncation may pollute the energy columns")
    if args.steps:
        verdict = "PASS" if worst <= tol else "FAIL"
        print(f"max theorem_lhs={_fmt(worst)} tol={_fmt(tol)} c={args.c} {verdict}")
    print(f"wrote {args.steps} rows to {args.out}")
    return EX_OK

# }}}


# {{{ audit


def random_field(rng: np.random.Generator, nx: int, ny: int, margin: int = SUPPORT_MARGIN) -> Field2D:
    """Standard normal interior values, zero within *margin* cells of the far edges."""
    vals = np.zeros((nx, ny))
    vals[: nx - margin, : ny - margin] = rng.standard_normal((nx - margin, ny - margin))
    return Field2D.from_interior(vals)


@dataclass
class AuditResult:
    identities: dict
    slacks: dict

    def passed(self, itol: float = 1e-12, stol: float = 1e-12) -> bool:
        return all(r <= itol for r in self.identities.values()) and all(
            s >= -stol for s in self.slacks.values()
        )


def run_audit(
    pairs: Sequence, trials: int, seed: int, nx: int = 32, ny: int = 32, corrupt: bool = False
) -> AuditResult:
    """Max relative identity residuals and min scaled inequality slacks over trials."""
    rng = np.random.default_rng(seed)
    ident = dict.fromkeys(["lemma1_first", "lemma1_second", "lemma2", "split"], 0.0)
    slack = dict.fromkeys(["lemma3", "estimate"], math.inf)
    for _ in range(trials):
        u = random_field(rng, nx, ny)
        if corrupt:
            data = u.data.copy()
            data[0, 1:-SUPPORT_MARGIN - 1] += 1.0  # breaks the edge extrapolation rule
            u = Field2D(data)
        for ab in pairs:
            cfl = CflPair(*ab)
            l1a, l1b = lemma1_verify(u, cfl)
            l2 = lemma2_verify(u, cfl)
            l3 = lemma3_verify(u, cfl)
            bd = breakdown(u, cfl)
            ident["lemma1_first"] = max(ident["lemma1_first"], l1a.relative_residual)
            ident["lemma1_second"] = max(ident["lemma1_second"], l1b.relative_residual)
            ident["lemma2"] = max(ident["lemma2"], l2.relative_residual)
            ident["split"] = max(ident["split"], abs(bd.split_residual) / bd.scale)
            slack["lemma3"] = min(slack["lemma3"], l3.slack / (1.0 + abs(l3.bound)))
            slack["estimate"] = min(slack["estimate"], (bd.estimate - bd.increment) / bd.scale)
    return AuditResult(ident, slack)


def cmd_audit(args) -> int:
    if args.sweep_cfl:
        pairs = AUDIT_PAIRS
    else:
        pairs = [(args.alpha, args.beta)]
    for ab in pairs:
        CflPair(*ab).check("explore")
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    res = run_audit(pairs, args.trials, args.seed, args.nx, args.ny, corrupt=args.corrupt_ghosts)
    print(f"seed={args.seed} trials={args.trials} pairs={len(pairs)} grid={args.nx}x{args.ny}")
    for name, r in res.identities.items():
        print(f"identity {name:14s} max_rel_residual={r:.3e} {'PASS' if r <= 1e-12 else 'FAIL'}")
    for name, s in res.slacks.items():
        shown = 0.0 if math.isinf(s) else s
        print(f"inequality {name:12s} min_scaled_slack={shown:.3e} {'PASS' if s >= -1e-12 else 'FAIL'}")
    ok = res.passed()
    print("PASS" if ok else "FAIL")
    return EX_OK if ok else EX_FAIL

# }}}


# {{{ sweep


def write_pgm(path: str, rmap: RegionMap) -> None:
    """P5 image; column ``i`` is ``lambda|a|``, rows run from ``mu|b| = 1`` down to 0."""
    r = rmap.resolution
    img = np.vectorize(PGM_LEVELS.get)(rmap.classes).astype(np.uint8)
    img = img.T[::-1]
    header = (
        f"P5\n# {rmap.which} map; origin bottom-left; column i -> lambda|a| = (i+0.5)/{r}, "
        f"row from bottom j -> mu|b| = (j+0.5)/{r}; 0 outside ball, 128 bad, 255 good\n"
        f"{r} {r}\n255\n"
    ).encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(header + img.tobytes())
    except OSError as exc:
        raise _Unwritable(path, exc) from exc


def read_pgm(path: str) -> RegionMap:
    """Inverse of :func:`write_pgm`."""
    with open(path, "rb") as fh:
        raw = fh.read()
    tokens, pos, which = [], 0, ""
    while len(tokens) < 4:
        end = raw.index(b"\n", pos)
        line = raw[pos:end].decode("ascii")
        pos = end + 1
        if line.startswith("#"):
            which = line[1:].split()[0]
            continue
        tokens.extend(line.split())
    if tokens[0] != "P5":
        raise ValueError(f"{path}: not a P5 file")
    w, h = int(tokens[1]), int(tokens[2])
    img = np.frombuffer(raw[pos:pos + w * h], dtype=np.uint8).reshape(h, w)
    inv = {v: k for k, v in PGM_LEVELS.items()}
    classes = np.vectorize(inv.get)(img[::-1].T).astype(np.uint8)
    return RegionMap(which=which, classes=classes)


def cmd_sweep(args) -> int:
    if args.res < 16:
        raise UsageError("--res must be at least 16")
    rmap = sweep(args.res, args.which, samples=args.samples)
    if args.out_csv:
        c = rmap.centers
        with _open_out(args.out_csv) as fh:
            fh.write("la,mb,class\n")
            for i in range(rmap.resolution):
                for j in range(rmap.resolution):
                    fh.write(f"{_fmt(c[i])},{_fmt(c[j])},{int(rmap.classes[i, j])}\n")
    if args.out_pgm:
        write_pgm(args.out_pgm, rmap)
    outside, bad, good = rmap.counts()
    print(f"which={args.which} res={args.res} outside={outside} bad={bad} good={good}")
    return EX_OK

# }}}


# {{{ converge


def cos_bump(cx: float, cy: float, radius: float, power: int = 6) -> Callable:
    """``cos(pi r / (2 R))^power`` inside the disc of radius ``R``, zero outside."""

    def f(x, y):
        r = np.hypot(x - cx, y - cy)
        return np.where(r < radius, np.cos(0.5 * np.pi * np.minimum(r, radius) / radius) ** power, 0.0)

    return f


BUMPS = {"interior": (0.6, 0.6), "corner": (0.3, 0.3)}


@dataclass
class ConvergenceResult:
    sizes: List[int]
    errors: List[float]

    @property
    def orders(self) -> List[float]:
        out = []
        for e0, e1 in zip(self.errors, self.errors[1:]):
            out.append(math.inf if e0 == 0.0 and e1 == 0.0 else math.log2(e0 / e1))
        return out


class DomainError(Exception):
    pass


def convergence_study(
    u0: Callable,
    levels: int = 4,
    coarse: int = 32,
    cfl: float = 0.2,
    final_time: float = 0.25,
    mode: str = "strict",
) -> ConvergenceResult:
    """L2 errors on ``[0,1]^2`` with ``a = b = -1`` and ``lambda = mu = cfl``."""
    pair = CflPair(-cfl, -cfl)
    pair.check(mode)
    sizes, errors = [], []
    for level in range(levels):
        n = coarse * 2**level
        grid = GridSpec(n, n, 1.0 / n, 1.0 / n, cfl / n)
        steps = round(final_time / grid.dt)
        if not math.isclose(steps * grid.dt, final_time, rel_tol=1e-12):
            raise DomainError(f"final time {final_time} is not a multiple of dt={grid.dt}")
        u = project_initial_2d(u0, grid)
        for _ in range(steps):
            u = step_2d(u, pair, mode=None)
        t = steps * grid.dt
        exact = project_initial_2d(lambda x, y: u0(x + t, y + t), grid)
        errors.append(float(np.sqrt(np.sum((u.interior - exact.interior) ** 2) * grid.dx * grid.dy)))
        sizes.append(n)
    return ConvergenceResult(sizes, errors)


def _check_domain(cx, cy, radius, final_time, coarse) -> str:
    far = 1.0 - SUPPORT_MARGIN / coarse
    if cx + radius > far or cy + radius > far:
        raise DomainError(
            f"bump reaches the far edges (support up to {max(cx, cy) + radius:g} > {far:g}); "
            "those edges carry no inflow data"
        )
    ex, ey = cx - final_time, cy - final_time
    if ex + radius <= 0.0 or ey + radius <= 0.0:
        raise DomainError(f"bump has left the domain by t={final_time:g}; no error to measure")
    inner = SUPPORT_MARGIN / coarse
    return "interior" if min(ex, ey, cx, cy) - radius >= inner else "boundary-crossing"


def cmd_converge(args) -> int:
    if args.levels < 2:
        raise UsageError("--levels must be at least 2")
    if args.bump == "zero":
        u0, kind = (lambda x, y: np.zeros(np.broadcast(x, y).shape)), "zero"
    else:
        cx, cy = args.center if args.center else BUMPS[args.bump]
        kind = _check_domain(cx, cy, args.radius, args.time, args.coarse)
        u0 = cos_bump(cx, cy, args.radius)
    res = convergence_study(u0, args.levels, args.coarse, args.cfl, args.time, args.mode)
    print(f"seed={args.seed} bump={args.bump} ({kind}) cfl={args.cfl} T={args.time}")
    print("n,l2_error,order")
    orders = res.orders
    for i, (n, e) in enumerate(zip(res.sizes, res.errors)):
        o = "" if i == 0 else ("exact" if math.isinf(orders[i - 1]) else f"{orders[i - 1]:.4f}")
        print(f"{n},{_fmt(e)},{o}")
    tail = orders[-2:]
    ok = all(math.isinf(o) or args.order_min <= o <= args.order_max for o in tail)
    print("PASS" if ok else "FAIL")
    return EX_OK if ok else EX_FAIL

# }}}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lwquarter", description=__doc__.split("\n\n")[0].strip(" -\n"))
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser(
        "simulate",
        help="run the scheme and write per-step energies",
        epilog="--ic file reads nx*ny whitespace-separated doubles in row-major order "
        "(first index j along x varies slowest).",
    )
    s.add_argument("--nx", type=int, default=64)
    s.add_argument("--ny", type=int, default=64)
    s.add_argument("--dx", type=float, default=1.0)
    s.add_argument("--dy", type=float, default=1.0)
    s.add_argument("--dt", type=float, default=0.05)
    s.add_argument("--a", type=float, default=-1.0, help="speed along x (must be negative)")
    s.add_argument("--b", type=float, default=-1.0, help="speed along y (must be negative)")
    s.add_argument("--steps", type=int, default=100)
    s.add_argument("--ic", choices=("gaussian", "spike", "zero", "file"), default="gaussian")
    s.add_argument("--ic-file", help="initial values for --ic file")
    s.add_argument("--center", type=float, nargs=2, metavar=("J", "K"), help="bump or spike position in cells")
    s.add_argument("--width", type=float, help="Gaussian standard deviation in cells")
    s.add_argument("--mode", choices=("strict", "explore"), default="strict")
    s.add_argument("--c", type=float, default=0.1, help="dissipation constant of the estimate")
    s.add_argument("--M", type=float, default=2.0, help="comparability constant")
    s.add_argument("--eps", type=float, default=0.25, help="bound on alpha^2 + beta^2 in strict mode")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_simulate)

    a = sub.add_parser("audit", help="verify the energy identities on random fields")
    a.add_argument("--trials", type=int, default=100)
    a.add_argument("--seed", type=int, default=0, help="seed for numpy's PCG64 generator")
    a.add_argument("--alpha", type=float, default=-0.3)
    a.add_argument("--beta", type=float, default=-0.2)
    a.add_argument("--sweep-cfl", action="store_true", help="use a fixed list of ten Courant pairs")
    a.add_argument("--nx", type=int, default=32)
    a.add_argument("--ny", type=int, default=32)
    a.add_argument("--corrupt-ghosts", action="store_true", help=argparse.SUPPRESS)
    a.set_defaults(func=cmd_audit)

    w = sub.add_parser("sweep", help="classify the CFL plane")
    w.add_argument("--which", choices=WHICH, required=True)
    w.add_argument("--res", type=int, default=256)
    w.add_argument("--samples", type=int, default=256, help="x samples for the boundary symbol")
    w.add_argument("--out-csv")
    w.add_argument("--out-pgm")
    w.set_defaults(func=cmd_sweep)

    c = sub.add_parser("converge", help="grid refinement study")
    c.add_argument("--levels", type=int, default=4)
    c.add_argument("--coarse", type=int, default=32)
    c.add_argument("--cfl", type=float, default=0.2, help="lambda = mu with a = b = -1")
    c.add_argument("--bump", choices=("interior", "corner", "zero"), default="interior")
    c.add_argument("--center", type=float, nargs=2, metavar=("X", "Y"))
    c.add_argument("--radius", type=float, default=0.25)
    c.add_argument("--time", type=float, default=0.25)
    c.add_argument("--mode", choices=("strict", "explore"), default="strict")
    c.add_argument("--order-min", type=float, default=1.7)
    c.add_argument("--order-max", type=float, default=2.3)
    c.add_argument("--seed", type=int, default=0, help="reported only; the study is deterministic")
    c.set_defaults(func=cmd_converge)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CflError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_CFL
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except (_DataError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except _Unwritable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_CANTCREAT
    except SupportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except NonFiniteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_FAIL


if __name__ == "__main__":
    sys.exit(main())
