"""Variable elimination: Sylvester resultants and linear substitution.

Determinants of polynomial matrices are computed exactly.  Three backends
are available and must agree bit for bit:

* ``"cofactor"`` -- Laplace expansion, only sensible up to about 6x6.
* ``"bareiss"`` -- fraction-free Gaussian elimination over ``MultiPoly``.
* ``"interp"``  -- evaluate the matrix on an integer grid, take integer
  Bareiss determinants, and recover the polynomial by Newton interpolation
  one variable at a time.  Grid size comes from per-variable degree bounds.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from xraypent.polycore import (
    NEG_INF,
    NVARS,
    ONE,
    VAR_INDEX,
    VARS,
    ZERO,
    MultiPoly,
    coefficients_in,
    degree_in,
    from_coefficients,
    primitive_part,
    try_exact_div,
)

log = logging.getLogger(__name__)


class EliminationError(ValueError):
    pass


@dataclass(frozen=True)
class PolyMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[MultiPoly, ...], ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be positive")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[MultiPoly | int]]) -> "PolyMatrix":
        conv = tuple(
            tuple(e if isinstance(e, MultiPoly) else MultiPoly.const(e) for e in row)
            for row in rows
        )
        return cls(len(conv), len(conv[0]) if conv else 0, conv)

    def __getitem__(self, ij: tuple[int, int]) -> MultiPoly:
        i, j = ij
        return self.entries[i][j]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols


@dataclass(frozen=True)
class LinearSolution:
    """``a_coef * var + b_coef = 0`` with neither coefficient containing ``var``."""

    var: str
    a_coef: MultiPoly
    b_coef: MultiPoly

    def __post_init__(self):
        if self.a_coef.is_zero():
            raise ValueError("linear coefficient must be nonzero")
        if degree_in(self.a_coef, self.var) > 0 or degree_in(self.b_coef, self.var) > 0:
            raise ValueError(f"coefficients must not contain {self.var}")

    @classmethod
    def from_poly(cls, p: MultiPoly, var: str) -> "LinearSolution":
        if degree_in(p, var) != 1:
            raise EliminationError(f"polynomial is not linear in {var}")
        b, a = coefficients_in(p, var)
        return cls(var, a, b)


# -- Sylvester matrix ----------------------------------------------------------

def sylvester(f: MultiPoly, g: MultiPoly, var: str) -> PolyMatrix:
    """Sylvester matrix of ``f`` and ``g`` in ``var``.

    The first ``deg g`` rows hold shifted coefficients of ``f`` and the last
    ``deg f`` rows those of ``g``, highest power first.
    """
    if f.is_zero() or g.is_zero():
        raise EliminationError("zero polynomial has no Sylvester matrix")
    m = degree_in(f, var)
    n = degree_in(g, var)
    if m == 0 and n == 0:
        raise EliminationError(f"neither polynomial involves {var}")
    fc = coefficients_in(f, var)[::-1]
    gc = coefficients_in(g, var)[::-1]
    size = m + n
    rows = []
    for i in range(n):
        rows.append(tuple([ZERO] * i + fc + [ZERO] * (size - m - 1 - i)))
    for i in range(m):
        rows.append(tuple([ZERO] * i + gc + [ZERO] * (size - n - 1 - i)))
    return PolyMatrix(size, size, tuple(rows))


# -- determinant kernels -------------------------------------------------------

def det_int_bareiss(a: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by Bareiss elimination."""
    m = [list(r) for r in a]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            lead = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pivot * ri[j] - lead * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1] if n else 1


def det_rational(a: Sequence[Sequence[Fraction | int]]) -> Fraction:
    """Determinant over the rationals by Gaussian elimination."""
    m = [[Fraction(e) for e in r] for r in a]
    n = len(m)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            det = -det
        pk = m[k][k]
        det *= pk
        for i in range(k + 1, n):
            f = m[i][k] / pk
            if f:
                for j in range(k + 1, n):
                    m[i][j] -= f * m[k][j]
    return det


def det_cofactor(m: PolyMatrix) -> MultiPoly:
    """Laplace expansion along the first row (reference oracle, exponential)."""
    if not m.is_square:
        raise EliminationError("determinant of a non-square matrix")

    def rec(rows: tuple[int, ...], cols: tuple[int, ...]) -> MultiPoly:
        if len(rows) == 1:
            return m[rows[0], cols[0]]
        total = ZERO
        r0 = rows[0]
        for k, c in enumerate(cols):
            e = m[r0, c]
            if e.is_zero():
                continue
            minor = rec(rows[1:], cols[:k] + cols[k + 1:])
            term = e * minor
            total = total - term if k % 2 else total + term
        return total

    return rec(tuple(range(m.rows)), tuple(range(m.cols)))


def det_bareiss_poly(m: PolyMatrix) -> MultiPoly:
    if not m.is_square:
        raise EliminationError("determinant of a non-square matrix")
    a = [list(r) for r in m.entries]
    n = m.rows
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ZERO
        pivot = a[k][k]
        for i in range(k + 1, n):
            lead = a[i][k]
            for j in range(k + 1, n):
                num = pivot * a[i][j] - lead * a[k][j]
                q = try_exact_div(num, prev)
                if q is None:  # pragma: no cover - Sylvester identity guarantees this
                    raise ArithmeticError("Bareiss step was not exact")
                a[i][j] = q
            a[i][k] = ZERO
        prev = pivot
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def degree_bounds(m: PolyMatrix) -> list[int]:
    """Per-variable upper bound on the determinant's degree.

    For each variable take the smaller of the row-wise and column-wise sums
    of maximal entry degrees.
    """
    bounds = []
    for var in VARS:
        row_sum = 0
        for r in m.entries:
            d = max((degree_in(e, var) for e in r), default=NEG_INF)
            row_sum += 0 if d == NEG_INF else d
        col_sum = 0
        for j in range(m.cols):
            d = max((degree_in(m.entries[i][j], var) for i in range(m.rows)), default=NEG_INF)
            col_sum += 0 if d == NEG_INF else d
        bounds.append(int(min(row_sum, col_sum)))
    return bounds


def _nodes(count: int) -> list[int]:
    # Centered integer nodes keep evaluated magnitudes small.
    half = count // 2
    return list(range(-half, count - half))


def _eval_int(p: MultiPoly, point: dict[int, int]) -> int:
    total = 0
    for mon, c in p.terms.items():
        t = c
        for i, e in enumerate(mon):
            if e:
                t *= point[i] ** e
        total += t
    return total


def _det_at(args) -> int:
    entries, distinct, point = args
    vals = [_eval_int(p, point) for p in distinct]
    mat = [[0 if k < 0 else vals[k] for k in row] for row in entries]
    return det_int_bareiss(mat)


def _newton_to_monomial(nodes: Sequence[int], values: Sequence[Fraction]) -> list[Fraction]:
    """Ascending monomial coefficients of the interpolant through (nodes, values)."""
    n = len(nodes)
    dd = [Fraction(v) for v in values]
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - k])
    coeffs = [Fraction(0)] * n
    coeffs[0] = dd[n - 1]
    deg = 0
    for k in range(n - 2, -1, -1):
        # coeffs <- coeffs * (t - nodes[k]) + dd[k]
        deg += 1
        for j in range(deg, 0, -1):
            coeffs[j] = coeffs[j - 1] - nodes[k] * coeffs[j]
        coeffs[0] = dd[k] - nodes[k] * coeffs[0]
    return coeffs


def det_interp(m: PolyMatrix, workers: int = 1) -> MultiPoly:
    """Determinant by evaluation on an integer grid plus Newton interpolation."""
    if not m.is_square:
        raise EliminationError("determinant of a non-square matrix")
    bounds = degree_bounds(m)
    active = [i for i in range(NVARS) if bounds[i] > 0]
    distinct: list[MultiPoly] = []
    index: dict[MultiPoly, int] = {}
    layout = []
    for row in m.entries:
        out = []
        for e in row:
            if e.is_zero():
                out.append(-1)
                continue
            if e not in index:
                index[e] = len(distinct)
                distinct.append(e)
            out.append(index[e])
        layout.append(out)
    grids = [_nodes(bounds[i] + 1) for i in active]
    points = list(itertools.product(*grids))
    jobs = [(layout, distinct, dict(zip(active, pt))) for pt in points]
    if workers > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            values = list(ex.map(_det_at, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        values = [_det_at(j) for j in jobs]
    if not active:
        return MultiPoly.const(values[0])

    # Interpolate one axis at a time: keys start as node-index tuples and each
    # pass turns one position into a monomial exponent.
    shape = [range(len(g)) for g in grids]
    data: dict[tuple, Fraction] = {
        idx: Fraction(val) for idx, val in zip(itertools.product(*shape), values) if val
    }
    for axis, nodes in enumerate(grids):
        groups: dict[tuple, list] = {}
        for key, val in data.items():
            rest = key[:axis] + key[axis + 1:]
            groups.setdefault(rest, [0] * len(nodes))[key[axis]] = val
        data = {}
        for rest, vals in sorted(groups.items()):
            for k, c in enumerate(_newton_to_monomial(nodes, vals)):
                if c:
                    data[rest[:axis] + (k,) + rest[axis:]] = c
    coeffs = data
    terms = {}
    for exps, c in coeffs.items():
        if c.denominator != 1:  # pragma: no cover - integer determinant
            raise ArithmeticError("interpolated determinant has a non-integer coefficient")
        mon = [0] * NVARS
        for i, e in zip(active, exps):
            mon[i] = e
        terms[tuple(mon)] = c.numerator
    return MultiPoly(terms)


BACKENDS = ("bareiss", "cofactor", "interp")


def det_fraction_free(m: PolyMatrix, backend: str = "auto", workers: int = 1) -> MultiPoly:
    """Exact determinant of a square polynomial matrix."""
    if not m.is_square:
        raise EliminationError("determinant of a non-square matrix")
    if backend == "auto":
        small = m.rows <= 4 or all(e.is_constant() for r in m.entries for e in r)
        backend = "bareiss" if small else "interp"
    if backend == "bareiss":
        if all(e.is_constant() for r in m.entries for e in r):
            return MultiPoly.const(det_int_bareiss([[e.constant_value() for e in r] for r in m.entries]))
        return det_bareiss_poly(m)
    if backend == "cofactor":
        return det_cofactor(m)
    if backend == "interp":
        return det_interp(m, workers=workers)
    raise ValueError(f"unknown determinant backend {backend!r}")


# -- resultants ----------------------------------------------------------------

def resultant(f: MultiPoly, g: MultiPoly, var: str, backend: str = "auto", workers: int = 1) -> MultiPoly:
    """Resultant of ``f`` and ``g`` in ``var`` (determinant of :func:`sylvester`)."""
    return det_fraction_free(sylvester(f, g, var), backend=backend, workers=workers)


@dataclass(frozen=True)
class ResultantReport:
    value: MultiPoly
    common_factor_suspected: bool
    common_factor: MultiPoly | None = None
    reduced_value: MultiPoly | None = None


def resultant_report(f: MultiPoly, g: MultiPoly, var: str, backend: str = "auto",
                     retry: bool = True) -> ResultantReport:
    res = resultant(f, g, var, backend=backend)
    if not res.is_zero():
        return ResultantReport(res, False)
    log.warning("resultant in %s vanishes identically: common factor suspected", var)
    if not retry:
        return ResultantReport(res, True)
    h = common_divisor_in(f, g, var)
    if h is None:
        return ResultantReport(res, True)
    f2, g2 = try_exact_div(f, h), try_exact_div(g, h)
    reduced = None
    if degree_in(f2, var) > 0 or degree_in(g2, var) > 0:
        reduced = resultant(f2, g2, var, backend=backend)
    return ResultantReport(res, True, h, reduced)


def _prem(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    """Pseudo-remainder of ``f`` by ``g`` in ``var``."""
    m, n = degree_in(f, var), degree_in(g, var)
    gc = coefficients_in(g, var)
    lc = gc[-1]
    x = MultiPoly.var(var)
    r = f
    e = m - n + 1
    while not r.is_zero() and degree_in(r, var) >= n:
        d = degree_in(r, var)
        rl = coefficients_in(r, var)[-1]
        r = lc * r - rl * from_coefficients(gc, var) * x ** (d - n)
        e -= 1
    return r * (lc ** e) if e > 0 else r


def common_divisor_in(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly | None:
    """Common divisor of positive degree in ``var``, via a reduced PRS.

    Diagnostic helper for vanishing resultants; returns ``None`` when the
    candidate does not divide both inputs exactly.
    """
    a, b = f, g
    if degree_in(a, var) < degree_in(b, var):
        a, b = b, a
    beta = ONE
    while True:
        r = _prem(a, b, var)
        if r.is_zero():
            break
        q = try_exact_div(r, beta)
        if q is None:
            return None
        delta = degree_in(a, var) - degree_in(b, var)
        beta = coefficients_in(b, var)[-1] ** (delta + 1)
        a, b = b, q
        if degree_in(b, var) == 0:
            return None
    cand = primitive_part(b)
    if try_exact_div(f, cand) is not None and try_exact_div(g, cand) is not None:
        return cand
    return None


def substitute_linear(target: MultiPoly, sol: LinearSolution) -> MultiPoly:
    """``A**d * target(var = -B/A)`` with ``d = deg_var(target)``."""
    coeffs = coefficients_in(target, sol.var)
    if not coeffs:
        return ZERO
    d = len(coeffs) - 1
    neg_b = -sol.b_coef
    a_pows = [ONE]
    b_pows = [ONE]
    for _ in range(d):
        a_pows.append(a_pows[-1] * sol.a_coef)
        b_pows.append(b_pows[-1] * neg_b)
    out = ZERO
    for k, c in enumerate(coeffs):
        if not c.is_zero():
            out = out + c * b_pows[k] * a_pows[d - k]
    return out


def resultant_univariate(f: Sequence[Fraction | int], g: Sequence[Fraction | int]) -> Fraction:
    """Resultant of two univariate polynomials given by ascending coefficients."""
    f = list(f)
    g = list(g)
    while f and f[-1] == 0:
        f.pop()
    while g and g[-1] == 0:
        g.pop()
    m, n = len(f) - 1, len(g) - 1
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0 and n == 0:
        return Fraction(1)
    size = m + n
    fd, gd = f[::-1], g[::-1]
    rows = []
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - n - 1 - i))
    return det_rational(rows)


__all__ = [
    "BACKENDS",
    "EliminationError",
    "LinearSolution",
    "PolyMatrix",
    "ResultantReport",
    "common_divisor_in",
    "degree_bounds",
    "det_bareiss_poly",
    "det_cofactor",
    "det_fraction_free",
    "det_int_bareiss",
    "det_interp",
    "det_rational",
    "resultant",
    "resultant_report",
    "resultant_univariate",
    "substitute_linear",
    "sylvester",
]
