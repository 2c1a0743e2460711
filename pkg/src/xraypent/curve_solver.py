"""Numeric layer: root finding, curve tracing and back-solving parameter tuples.

Everything here works in binary64.  Exactness lives in :mod:`polycore` and
:mod:`eliminate`; this module only ever reads their polynomials.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from xraypent import paper_system as ps
from xraypent.polycore import (
    VARS,
    MultiPoly,
    coefficients_in,
    degree_in,
    derivative,
    eval_float,
)

log = logging.getLogger(__name__)

DEFAULT_BOX = (0.0, 1.0)
SIDE_MARGIN = 1e-6
SAMPLE_RESIDUAL = 1e-10
COMMON_ROOT_TOL = 1e-8


# -- univariate roots ----------------------------------------------------------

def _horner(coeffs: Sequence[float], t: float) -> float:
    acc = 0.0
    for c in coeffs:
        acc = acc * t + c
    return acc


def _derivative(coeffs: Sequence[float]) -> list[float]:
    n = len(coeffs) - 1
    return [c * (n - i) for i, c in enumerate(coeffs[:-1])]


def _abs_scale(coeffs: Sequence[float], t: float) -> float:
    return _horner([abs(c) for c in coeffs], abs(t))


def _bisect(coeffs, a: float, b: float, fa: float) -> float:
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = _horner(coeffs, mid)
        if fm == 0.0:
            return mid
        if (fm < 0) == (fa < 0):
            a, fa = mid, fm
        else:
            b = mid
        if b - a <= 1e-15 * max(1.0, abs(a)):
            break
    return 0.5 * (a + b)


def real_roots(coeffs: Sequence[float], lo: float, hi: float) -> list[float]:
    """Real roots of a polynomial (descending coefficients) inside ``[lo, hi]``.

    Critical points, found recursively from the derivative, cut the interval
    into monotone pieces; each piece holds at most one root, located by
    bisection.  Tangential (even-multiplicity) roots are picked up at critical
    points whose value is zero to rounding accuracy.  Multiple roots are
    reported once.
    """
    coeffs = [float(c) for c in coeffs]
    while coeffs and coeffs[0] == 0.0:
        coeffs.pop(0)
    if not coeffs:
        raise ValueError("zero polynomial")
    if not lo < hi:
        raise ValueError("empty interval")
    if len(coeffs) == 1:
        return []
    if len(coeffs) == 2:
        r = -coeffs[1] / coeffs[0]
        return [r] if lo <= r <= hi else []
    crit = real_roots(_derivative(coeffs), lo, hi)
    knots = [lo] + [c for c in crit if lo < c < hi] + [hi]
    roots: list[float] = []
    eps = 64 * np.finfo(float).eps
    for c in knots:
        fc = _horner(coeffs, c)
        if abs(fc) <= eps * _abs_scale(coeffs, c):
            roots.append(c)
    for a, b in zip(knots, knots[1:]):
        fa, fb = _horner(coeffs, a), _horner(coeffs, b)
        if fa == 0.0 or fb == 0.0:
            continue
        if (fa < 0) != (fb < 0):
            roots.append(_bisect(coeffs, a, b, fa))
    roots.sort()
    merged: list[float] = []
    for r in roots:
        if merged and r - merged[-1] <= 1e-12 * max(1.0, abs(r)):
            continue
        merged.append(r)
    return merged


def root_bound(coeffs: Sequence[float]) -> float:
    """Cauchy bound on the magnitude of every root."""
    lead = abs(coeffs[0])
    return 1.0 + max((abs(c) / lead for c in coeffs[1:]), default=0.0)


# -- parameter tuples and validation -------------------------------------------

@dataclass(frozen=True)
class ParameterTuple:
    u: float
    v: float
    w: float
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(getattr(self, n)) for n in VARS):
            raise ValueError("parameter tuple must be finite")

    def as_dict(self) -> dict[str, float]:
        return {n: getattr(self, n) for n in VARS}


@dataclass(frozen=True)
class ValidationReport:
    labels: tuple[str, ...]
    residuals: tuple[float, ...]
    scaled: tuple[float, ...]
    side_labels: tuple[str, ...]
    side_margins: tuple[float, ...]
    in_range: dict[str, bool]

    def __post_init__(self):
        if not (len(self.labels) == len(self.residuals) == len(self.scaled)):
            raise ValueError("residual sequences disagree in length")
        if len(self.side_labels) != len(self.side_margins):
            raise ValueError("side-condition sequences disagree in length")

    @property
    def max_residual(self) -> float:
        return max(self.scaled, default=0.0)

    @property
    def min_side_margin(self) -> float:
        return min(self.side_margins, default=math.inf)

    @property
    def all_in_range(self) -> bool:
        return all(self.in_range.values())

    def ok(self, tol: float = COMMON_ROOT_TOL, margin: float = SIDE_MARGIN) -> bool:
        return self.max_residual <= tol and self.min_side_margin >= margin

    def flagged_sides(self, margin: float = SIDE_MARGIN) -> list[str]:
        return [lab for lab, m in zip(self.side_labels, self.side_margins) if m < margin]


def validate_tuple(t: ParameterTuple, equations: Sequence[ps.SystemEquation] | None = None,
                   box: tuple[float, float] = DEFAULT_BOX) -> ValidationReport:
    """Residuals of every equation and margins of every side condition at ``t``."""
    if equations is None:
        equations = ps.pentagon_system()
    point = t.as_dict()
    labels, res, scaled, side_labels, margins = [], [], [], [], []
    for eq in equations:
        labels.append(eq.label)
        res.append(abs(eval_float(eq.poly, point)))
        scaled.append(ps.scaled_residual(eq.poly, point))
        for k, side in enumerate(eq.nonvanishing):
            side_labels.append(f"{eq.label}:{side}")
            margins.append(abs(eval_float(side, point)))
    lo, hi = box
    in_range = {n: lo < point[n] < hi for n in VARS}
    return ValidationReport(tuple(labels), tuple(res), tuple(scaled),
                            tuple(side_labels), tuple(margins), in_range)


# -- solve chains -----------------------------------------------------------------

@dataclass(frozen=True)
class SolveChain:
    """How to climb from a curve point (x, y) back to a full tuple.

    ``pair`` are two polynomials in (u, x, y) whose common u-roots are taken,
    ``v_equation`` is linear in v, and ``checks`` are the equations a tuple is
    validated against.
    """

    name: str
    pair: tuple[MultiPoly, MultiPoly]
    v_equation: MultiPoly
    checks: tuple[ps.SystemEquation, ...]


@functools.lru_cache(maxsize=None)
def chain_for_stage(stage: str) -> SolveChain:
    q1 = ps.equation("Q1")
    if stage == "P":
        return SolveChain("P", (ps.equation("R1"), ps.equation("R2")), q1,
                          tuple(ps.pentagon_system()))
    if stage == "Q":
        from xraypent.polycore import primitive_part

        s2 = primitive_part(ps.eliminate_v()["Q2"])
        return SolveChain("Q", (s2, ps.equation("R2")), q1, tuple(ps.derived_stage1()))
    raise ValueError(f"unknown stage {stage!r}")


def chain_curve(chain: SolveChain, cache: str | Path | None = None) -> MultiPoly:
    if chain.name == "P":
        return ps.final_resultant(cache)
    if chain.name == "Q":
        return ps.stage_q_curve(cache)
    raise ValueError(f"no curve for chain {chain.name!r}")


class _UPoly:
    """A polynomial in (u, x, y) prepared for fast float evaluation."""

    def __init__(self, p: MultiPoly):
        self.poly = p
        self.blocks = []
        for c in coefficients_in(p, "u"):
            self.blocks.append([(m[3], m[4], float(a)) for m, a in c.terms.items()])
        self.abs_total = sum(abs(float(a)) for a in p.terms.values())
        self.deg = p.total_degree()

    def u_coeffs(self, x: float, y: float) -> list[float]:
        """Descending coefficients in u at fixed (x, y)."""
        out = [math.fsum(a * x**i * y**j for i, j, a in blk) for blk in self.blocks]
        return out[::-1]

    def scaled(self, u: float, x: float, y: float) -> float:
        val = eval_float(self.poly, {"u": u, "x": x, "y": y, "v": 0.0, "w": 0.0, "z": 0.0})
        big = max(1.0, abs(u), abs(x), abs(y))
        return abs(val) / (1.0 + self.abs_total * big**self.deg)


@functools.lru_cache(maxsize=8)
def _prepared(chain: SolveChain):
    f, g = chain.pair
    vb, va = coefficients_in(chain.v_equation, "v")
    return _UPoly(f), _UPoly(g), _UPoly(va), _UPoly(vb)


@dataclass(frozen=True)
class Solution:
    tuple: ParameterTuple
    report: ValidationReport


@dataclass
class BackSolve:
    x: float
    y: float
    solutions: list[Solution] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self) -> int:
        return len(self.solutions)

    @property
    def tuples(self) -> list[ParameterTuple]:
        return [s.tuple for s in self.solutions]


def back_solve(cx: float, cy: float, chain: SolveChain | None = None,
               tol: float = COMMON_ROOT_TOL) -> BackSolve:
    """All parameter tuples over the curve point ``(cx, cy)``.

    Real roots u of the first chain polynomial are kept when the second one
    vanishes there to ``tol`` (scaled); v then comes from the linear equation,
    ``w = x - u`` and ``z = (y*u + v*w)/w``.
    """
    chain = chain or chain_for_stage("P")
    f, g, va, vb = _prepared(chain)
    out = BackSolve(cx, cy)
    fc = f.u_coeffs(cx, cy)
    while fc and fc[0] == 0.0:
        fc.pop(0)
    if len(fc) < 2:
        out.skipped.append("first polynomial has no u-dependence at this point")
        return out
    bound = root_bound(fc)
    for u in real_roots(fc, -bound, bound):
        if g.scaled(u, cx, cy) > tol:
            continue
        a = _horner(va.u_coeffs(cx, cy), u)
        b = _horner(vb.u_coeffs(cx, cy), u)
        if abs(a) <= 1e-12 * (1.0 + abs(b)):
            out.skipped.append(f"u={u:.17g}: v-coefficient vanishes")
            continue
        v = -b / a
        w = cx - u
        if abs(w) <= 1e-12:
            out.skipped.append(f"u={u:.17g}: w = x - u vanishes")
            continue
        z = (cy * u + v * w) / w
        try:
            t = ParameterTuple(u, v, w, cx, cy, z)
        except ValueError:
            out.skipped.append(f"u={u:.17g}: non-finite tuple")
            continue
        out.solutions.append(Solution(t, validate_tuple(t, chain.checks)))
    return out


@functools.lru_cache(maxsize=8)
def _jacobian(chain: SolveChain):
    f, g = chain.pair
    return ((f, derivative(f, "y"), derivative(f, "u")),
            (g, derivative(g, "y"), derivative(g, "u")))


def _polish(chain: SolveChain, x: float, y: float, u: float, steps: int = 6) -> tuple[float, float]:
    """Newton iterations on the chain pair in (y, u) at fixed x."""
    rows = _jacobian(chain)
    for _ in range(steps):
        pt = {"u": u, "x": x, "y": y}
        vals = [[eval_float(p, pt) for p in row] for row in rows]
        rhs = [-vals[0][0], -vals[1][0]]
        jac = np.array([vals[0][1:], vals[1][1:]])
        try:
            dy, du = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError:
            break
        if not (math.isfinite(dy) and math.isfinite(du)) or abs(dy) + abs(du) > 1e-3:
            break
        y, u = y + dy, u + du
        if abs(dy) + abs(du) < 1e-16:
            break
    return y, u


@dataclass
class SampleResult:
    tuples: list[ParameterTuple]
    reports: list[ValidationReport]
    attempts: int
    slices_without_roots: int = 0
    rejected_residual: int = 0
    rejected_side: int = 0
    requested: int = 0

    @property
    def complete(self) -> bool:
        return len(self.tuples) >= self.requested


def _strip_monomial(p: MultiPoly) -> MultiPoly:
    mc = ps.monomial_content(p)
    if not any(mc):
        return p
    return MultiPoly({tuple(a - b for a, b in zip(m, mc)): c for m, c in p.terms.items()})


def _y_slice(curve: MultiPoly, x: float) -> list[float]:
    coeffs = coefficients_in(curve, "y")
    vals = [eval_float(c, {"x": x}) for c in coeffs]
    return vals[::-1]


def sample_solutions(n: int, seed: int, chain: SolveChain | None = None,
                     curve: MultiPoly | None = None, cache: str | Path | None = None,
                     max_attempts: int | None = None, box: tuple[float, float] = DEFAULT_BOX,
                     residual_tol: float = SAMPLE_RESIDUAL) -> SampleResult:
    """Draw solutions of a chain's system by slicing its curve at random x."""
    if n < 1:
        raise ValueError("n must be positive")
    chain = chain or chain_for_stage("P")
    if curve is None:
        curve = chain_curve(chain, cache)
    curve = _strip_monomial(curve)
    rng = np.random.default_rng(seed)
    max_attempts = max_attempts or 20 * n
    result = SampleResult([], [], 0, requested=n)
    lo, hi = box
    while len(result.tuples) < n and result.attempts < max_attempts:
        result.attempts += 1
        x = float(rng.uniform(lo, hi))
        ys = [y for y in real_roots(_y_slice(curve, x), lo, hi) if lo < y < hi]
        if not ys:
            result.slices_without_roots += 1
            continue
        for y in ys:
            if len(result.tuples) >= n:
                break
            bs = back_solve(x, y, chain, tol=1e-6)
            for sol in bs.solutions:
                yp, up = _polish(chain, x, y, sol.tuple.u)
                polished = back_solve_at(chain, x, yp, up)
                if polished is None:
                    continue
                t, rep = polished
                if rep.max_residual > residual_tol:
                    result.rejected_residual += 1
                    continue
                if rep.min_side_margin < SIDE_MARGIN:
                    result.rejected_side += 1
                    continue
                result.tuples.append(t)
                result.reports.append(rep)
                break
    if not result.complete:
        log.warning("sample_solutions(%s): %d of %d tuples after %d attempts "
                    "(%d rejected on residual, %d on side conditions)", chain.name,
                    len(result.tuples), n, result.attempts, result.rejected_residual,
                    result.rejected_side)
    return result


def back_solve_at(chain: SolveChain, x: float, y: float, u: float):
    """Complete a known (x, y, u) to a tuple and validate it; None if degenerate."""
    _, _, va, vb = _prepared(chain)
    a = _horner(va.u_coeffs(x, y), u)
    b = _horner(vb.u_coeffs(x, y), u)
    w = x - u
    if abs(a) <= 1e-12 * (1.0 + abs(b)) or abs(w) <= 1e-12:
        return None
    v = -b / a
    z = (y * u + v * w) / w
    try:
        t = ParameterTuple(u, v, w, x, y, z)
    except ValueError:
        return None
    return t, validate_tuple(t, chain.checks)


# -- curve tracing ------------------------------------------------------------------

@dataclass(frozen=True)
class CurvePoint:
    cx: float
    cy: float
    residual: float
    cell: tuple[int, int]

    def __post_init__(self):
        if not self.residual >= 0:
            raise ValueError("residual must be nonnegative")


@dataclass(frozen=True)
class Domain:
    x0: float = 0.0
    x1: float = 1.0
    y0: float = 0.0
    y1: float = 1.0

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise ValueError("empty domain")


class BivariateEvaluator:
    """Vectorised binary64 evaluation of a polynomial in x and y."""

    def __init__(self, p: MultiPoly):
        extra = p.variables() - {"x", "y"}
        if extra:
            raise ValueError(f"curve polynomial must only involve x and y, found {sorted(extra)}")
        dx = max(int(degree_in(p, "x")), 0)
        dy = max(int(degree_in(p, "y")), 0)
        c = np.zeros((dx + 1, dy + 1))
        absc = np.zeros((dx + 1, dy + 1))
        for m, a in p.terms.items():
            c[m[3], m[4]] = float(a)
            absc[m[3], m[4]] = abs(float(a))
        self.coeffs = c
        self.abs_coeffs = absc
        self.abs_total = float(absc.sum())
        self.deg = p.total_degree() if p else 0

    @staticmethod
    def _horner2(c: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        # pointwise: xs and ys share a shape
        acc_x = np.zeros_like(xs)
        for i in range(c.shape[0] - 1, -1, -1):
            acc_y = np.zeros_like(ys)
            row = c[i]
            for j in range(row.shape[0] - 1, -1, -1):
                acc_y = acc_y * ys + row[j]
            acc_x = acc_x * xs + acc_y
        return acc_x

    def __call__(self, xs, ys) -> np.ndarray:
        xs, ys = np.broadcast_arrays(np.asarray(xs, float), np.asarray(ys, float))
        return self._horner2(self.coeffs, xs, ys)

    def lattice(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Values on the tensor grid, indexed ``[ix, iy]``."""
        cy = np.empty((self.coeffs.shape[0], ys.shape[0]))
        for i in range(self.coeffs.shape[0]):
            acc = np.zeros_like(ys)
            for j in range(self.coeffs.shape[1] - 1, -1, -1):
                acc = acc * ys + self.coeffs[i, j]
            cy[i] = acc
        out = np.zeros((xs.shape[0], ys.shape[0]))
        for i in range(self.coeffs.shape[0] - 1, -1, -1):
            out = out * xs[:, None] + cy[i][None, :]
        return out

    def scaled_residual(self, xs, ys) -> np.ndarray:
        xs, ys = np.broadcast_arrays(np.asarray(xs, float), np.asarray(ys, float))
        big = np.maximum(1.0, np.maximum(np.abs(xs), np.abs(ys)))
        return np.abs(self(xs, ys)) / (1.0 + self.abs_total * big**self.deg)


def _refine_edges(ev: BivariateEvaluator, ax, ay, bx, by, fa, iters: int = 60):
    """Vectorised bisection along segments a->b where the sign flips."""
    lo = np.zeros_like(ax)
    hi = np.ones_like(ax)
    neg_a = fa < 0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = ev(ax + mid * (bx - ax), ay + mid * (by - ay))
        same = (fm < 0) == neg_a
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    t = 0.5 * (lo + hi)
    return ax + t * (bx - ax), ay + t * (by - ay)


def trace_curve(poly: MultiPoly, grid: int = 512, domain: Domain | Sequence[float] = Domain(),
                workers: int = 1) -> list[CurvePoint]:
    """Marching-squares point cloud of the zero set of ``poly`` in (x, y).

    Lattice values are classified by sign, with exact zeros counted as
    positive.  Every lattice edge whose endpoints differ in sign yields one
    point, located by bisection along that edge and attributed to the cell
    below (horizontal edges) or to the left (vertical edges) of it.  Output is
    sorted by cell index, so it does not depend on ``workers``.
    """
    if grid < 2:
        raise ValueError("grid must be at least 2")
    if poly.is_zero():
        raise ValueError("cannot trace the zero polynomial")
    if not isinstance(domain, Domain):
        domain = Domain(*domain)
    ev = BivariateEvaluator(poly)
    xs = np.linspace(domain.x0, domain.x1, grid + 1)
    ys = np.linspace(domain.y0, domain.y1, grid + 1)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        chunks = np.array_split(np.arange(grid + 1), workers)
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda idx: ev.lattice(xs[idx], ys), chunks))
        vals = np.concatenate(parts, axis=0)
    else:
        vals = ev.lattice(xs, ys)
    neg = vals < 0

    # edges along x: (i, j) -> (i+1, j)
    ix, jx = np.nonzero(neg[:-1, :] != neg[1:, :])
    # edges along y: (i, j) -> (i, j+1)
    iy, jy = np.nonzero(neg[:, :-1] != neg[:, 1:])

    ax = np.concatenate([xs[ix], xs[iy]])
    ay = np.concatenate([ys[jx], ys[jy]])
    bx = np.concatenate([xs[ix + 1], xs[iy]])
    by = np.concatenate([ys[jx], ys[jy + 1]])
    fa = np.concatenate([vals[ix, jx], vals[iy, jy]])
    ci = np.concatenate([ix, np.minimum(iy, grid - 1)])
    cj = np.concatenate([np.minimum(jx, grid - 1), jy])
    kind = np.concatenate([np.zeros(len(ix), int), np.ones(len(iy), int)])
    if ax.size == 0:
        return []
    px, py = _refine_edges(ev, ax, ay, bx, by, fa)
    res = ev.scaled_residual(px, py)
    order = np.lexsort((py, px, kind, cj, ci))
    return [CurvePoint(float(px[k]), float(py[k]), float(res[k]), (int(ci[k]), int(cj[k])))
            for k in order]


__all__ = [
    "BackSolve",
    "CurvePoint",
    "Domain",
    "ParameterTuple",
    "SampleResult",
    "SolveChain",
    "Solution",
    "ValidationReport",
    "back_solve",
    "chain_for_stage",
    "real_roots",
    "sample_solutions",
    "trace_curve",
    "validate_tuple",
]
