"""Exact convex-polygon tomography: chord functions and Steiner symmetrals.

For a direction ``d`` with normal ``n = (-dy, dx)`` every point gets
coordinates ``s = P.d / d.d`` (along the X-ray) and ``t = P.n / n.n``
(across it).  The chord function records ``max s - min s`` over the line
``t = const``; it is the Euclidean chord length divided by ``|d|``, which
keeps everything rational.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

log = logging.getLogger(__name__)


class PolygonError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Point2:
    px: Fraction
    py: Fraction

    def __init__(self, px, py):
        object.__setattr__(self, "px", Fraction(px))
        object.__setattr__(self, "py", Fraction(py))

    def __iter__(self):
        yield self.px
        yield self.py

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.px + other.px, self.py + other.py)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.px - other.px, self.py - other.py)

    def __repr__(self) -> str:
        return f"Point2({self.px}, {self.py})"


@dataclass(frozen=True)
class Direction:
    dx: Fraction
    dy: Fraction

    def __init__(self, dx, dy):
        dx, dy = Fraction(dx), Fraction(dy)
        if dx == 0 and dy == 0:
            raise ValueError("direction must be nonzero")
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dy", dy)

    @property
    def normal(self) -> tuple[Fraction, Fraction]:
        return (-self.dy, self.dx)

    def s(self, p: Point2) -> Fraction:
        return (p.px * self.dx + p.py * self.dy) / (self.dx**2 + self.dy**2)

    def t(self, p: Point2) -> Fraction:
        nx, ny = self.normal
        return (p.px * nx + p.py * ny) / (nx**2 + ny**2)

    def point(self, s: Fraction, t: Fraction) -> Point2:
        nx, ny = self.normal
        return Point2(s * self.dx + t * nx, s * self.dy + t * ny)

    def __repr__(self) -> str:
        return f"Direction({self.dx}, {self.dy})"


def _cross(o: Point2, a: Point2, b: Point2) -> Fraction:
    return (a.px - o.px) * (b.py - o.py) - (a.py - o.py) * (b.px - o.px)


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: tuple[Point2, ...]

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self):
        vs = self.vertices
        return zip(vs, vs[1:] + vs[:1])

    def canonical(self) -> tuple[Point2, ...]:
        """Vertices rotated to start at the lexicographically smallest one."""
        k = self.vertices.index(min(self.vertices))
        return self.vertices[k:] + self.vertices[:k]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConvexPolygon):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def translate(self, dx, dy) -> "ConvexPolygon":
        off = Point2(dx, dy)
        return ConvexPolygon(tuple(v + off for v in self.vertices))


def signed_area(points: Sequence[Point2]) -> Fraction:
    total = Fraction(0)
    n = len(points)
    for i in range(n):
        a, b = points[i], points[(i + 1) % n]
        total += a.px * b.py - b.px * a.py
    return total / 2


def validate_polygon(points: Iterable, allow_degenerate: bool = False) -> ConvexPolygon:
    """Check convexity exactly and return the polygon in counterclockwise order."""
    pts = [p if isinstance(p, Point2) else Point2(*p) for p in points]
    if len(pts) < 3:
        raise PolygonError("a polygon needs at least 3 vertices")
    if len(set(pts)) != len(pts):
        raise PolygonError("repeated vertex")
    area = signed_area(pts)
    if area == 0:
        raise PolygonError("zero area")
    if area < 0:
        pts.reverse()
    n = len(pts)
    for i in range(n):
        c = _cross(pts[i - 1], pts[i], pts[(i + 1) % n])
        if c < 0:
            raise PolygonError(f"not convex at vertex {i}")
        if c == 0 and not allow_degenerate:
            raise PolygonError(f"collinear vertices around vertex {i}")
    # Left turns everywhere still admit star polygons; a convex boundary
    # changes vertical direction exactly twice.
    signs = [b.py > a.py for a, b in zip(pts, pts[1:] + pts[:1]) if b.py != a.py]
    flips = sum(1 for s0, s1 in zip(signs, signs[1:] + signs[:1]) if s0 != s1)
    if flips > 2:
        raise PolygonError("polygon winds more than once")
    return ConvexPolygon(tuple(pts))


def area(p: ConvexPolygon) -> Fraction:
    return signed_area(p.vertices)


@dataclass(frozen=True)
class ChordFunction:
    """Piecewise-linear chord extent, zero outside ``[breakpoints[0], breakpoints[-1]]``."""

    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.breakpoints) != len(self.values) or not self.breakpoints:
            raise ValueError("breakpoints and values must be nonempty and aligned")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must increase strictly")
        if any(v < 0 for v in self.values):
            raise ValueError("chord extents are nonnegative")

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        bp, vals = self.breakpoints, self.values
        if t < bp[0] or t > bp[-1]:
            return Fraction(0)
        for (t0, v0), (t1, v1) in zip(zip(bp, vals), zip(bp[1:], vals[1:])):
            if t0 <= t <= t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        return vals[-1]

    def slopes(self) -> list[Fraction]:
        return [(v1 - v0) / (t1 - t0) for t0, t1, v0, v1 in
                zip(self.breakpoints, self.breakpoints[1:], self.values, self.values[1:])]

    def is_concave(self) -> bool:
        s = self.slopes()
        return all(a >= b for a, b in zip(s, s[1:]))

    def is_canonical(self) -> bool:
        s = self.slopes()
        return all(a != b for a, b in zip(s, s[1:]))


def _canonicalize(bp: list[Fraction], vals: list[Fraction]) -> ChordFunction:
    keep_t, keep_v = [bp[0]], [vals[0]]
    for i in range(1, len(bp) - 1):
        t0, v0 = keep_t[-1], keep_v[-1]
        t1, v1 = bp[i], vals[i]
        t2, v2 = bp[i + 1], vals[i + 1]
        if (v1 - v0) * (t2 - t1) == (v2 - v1) * (t1 - t0):
            continue
        keep_t.append(t1)
        keep_v.append(v1)
    if len(bp) > 1:
        keep_t.append(bp[-1])
        keep_v.append(vals[-1])
    return ChordFunction(tuple(keep_t), tuple(keep_v))


def chord_function(p: ConvexPolygon, d: Direction) -> ChordFunction:
    st = [(d.s(v), d.t(v)) for v in p.vertices]
    ts = sorted({t for _, t in st})
    edges = list(zip(st, st[1:] + st[:1]))
    values = []
    for level in ts:
        hits = []
        for (s0, t0), (s1, t1) in edges:
            if t0 == t1:
                if t0 == level:
                    hits += [s0, s1]
            elif min(t0, t1) <= level <= max(t0, t1):
                hits.append(s0 + (s1 - s0) * (level - t0) / (t1 - t0))
        values.append(max(hits) - min(hits))
    return _canonicalize(ts, values)


def chord_functions_equal(a: ChordFunction, b: ChordFunction) -> bool:
    return a.breakpoints == b.breakpoints and a.values == b.values


def steiner_symmetral(p: ConvexPolygon, d: Direction) -> ConvexPolygon:
    """Recenter every chord parallel to ``d`` on the axis ``s = 0``."""
    f = chord_function(p, d)
    half = [v / 2 for v in f.values]
    right = [d.point(h, t) for t, h in zip(f.breakpoints, half)]
    left = [d.point(-h, t) for t, h in zip(f.breakpoints, half)]
    pts: list[Point2] = []
    for q in right + left[::-1]:
        if not pts or pts[-1] != q:
            pts.append(q)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    return validate_polygon(pts)


def xray_equivalent(p: ConvexPolygon, q: ConvexPolygon, dirs: Sequence[Direction]) -> bool:
    if not dirs:
        raise ValueError("need at least one direction")
    return all(chord_functions_equal(chord_function(p, d), chord_function(q, d)) for d in dirs)


def per_direction_equality(p: ConvexPolygon, q: ConvexPolygon,
                           dirs: Sequence[Direction]) -> list[bool]:
    return [chord_functions_equal(chord_function(p, d), chord_function(q, d)) for d in dirs]


def squared_sides(p: ConvexPolygon) -> list[Fraction]:
    return sorted((b.px - a.px) ** 2 + (b.py - a.py) ** 2 for a, b in p.edges())


def congruent_triangles(a: ConvexPolygon, b: ConvexPolygon) -> bool:
    """SSS test on exact squared side lengths."""
    return squared_sides(a) == squared_sides(b)


def translate_along(p: ConvexPolygon, q: ConvexPolygon, d: Direction) -> bool:
    """True when ``q`` is ``p`` shifted by a multiple of ``d``."""
    pa, qa = p.canonical(), q.canonical()
    if len(pa) != len(qa):
        return False
    off = qa[0] - pa[0]
    if any(b - a != off for a, b in zip(pa, qa)):
        return False
    return off.px * d.dy == off.py * d.dx


# -- the ambiguous triangle search ---------------------------------------------------

class SearchFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class AmbiguousPair:
    first: ConvexPolygon
    second: ConvexPolygon
    directions: tuple[Direction, Direction]
    attempts: int


AXES = (Direction(1, 0), Direction(0, 1))


def _triangle(xs, ys, perm) -> list[tuple]:
    return [(xs[i], ys[perm[i]]) for i in range(3)]


def _mid_chords(xs, ys, perm) -> tuple[float, float]:
    """Horizontal chord at the middle height and vertical chord at the middle abscissa."""
    pts = _triangle(xs, ys, perm)

    def chord(level, along):  # along=0: horizontal lines y=level
        hits = []
        for a, b in zip(pts, pts[1:] + pts[:1]):
            ta, tb = a[1 - along], b[1 - along]
            if ta == tb:
                continue
            if min(ta, tb) <= level <= max(ta, tb):
                hits.append(a[along] + (b[along] - a[along]) * (level - ta) / (tb - ta))
        return max(hits) - min(hits)

    return chord(ys[1], 0), chord(xs[1], 1)


def find_ambiguous_triangles(seed: int = 1, max_attempts: int = 500) -> AmbiguousPair:
    """Two non-congruent triangles with equal X-rays in both axis directions.

    Both triangles have their vertices on the same three vertical and three
    horizontal lines (so projections agree), matched by different
    permutations.  The middle x-coordinate is drawn as a random rational; the
    middle y-coordinate that equalises the middle chords is found numerically,
    rationalised, and the pair is then re-verified with exact arithmetic.
    """
    from scipy.optimize import brentq

    rng = random.Random(seed)
    perms = list(itertools.permutations(range(3)))
    pairs = [(a, b) for a in perms for b in perms if a != b]
    for attempt in range(1, max_attempts + 1):
        pi, rho = pairs[rng.randrange(len(pairs))]
        sx = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        sy = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        if sx == sy:
            continue
        ox = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        oy = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        a = Fraction(rng.randint(1, 19), 20)

        def gap(b, idx):
            xs, ys = (0.0, float(a), 1.0), (0.0, b, 1.0)
            return _mid_chords(xs, ys, pi)[idx] - _mid_chords(xs, ys, rho)[idx]

        grid = [k / 200 for k in range(1, 200)]
        sol = None
        for lo, hi in zip(grid, grid[1:]):
            g0, g1 = gap(lo, 0), gap(hi, 0)
            if g0 == 0:
                sol = lo
                break
            if (g0 < 0) != (g1 < 0):
                sol = brentq(gap, lo, hi, args=(0,), xtol=1e-15)
                break
        if sol is None or abs(gap(sol, 1)) > 1e-9:
            continue
        b = Fraction(sol).limit_denominator(1000)
        if not 0 < b < 1:
            continue
        xs = (ox, ox + a * sx, ox + sx)
        ys = (oy, oy + b * sy, oy + sy)
        try:
            t1 = validate_polygon(_triangle(xs, ys, pi))
            t2 = validate_polygon(_triangle(xs, ys, rho))
        except PolygonError:
            continue
        if t1 == t2 or congruent_triangles(t1, t2):
            continue
        if any(translate_along(t1, t2, d) for d in AXES):
            continue
        if xray_equivalent(t1, t2, AXES):
            log.info("ambiguous pair found after %d attempts", attempt)
            return AmbiguousPair(t1, t2, AXES, attempt)
    raise SearchFailed(f"no ambiguous triangle pair in {max_attempts} attempts (seed {seed})")


# -- polygon file format -------------------------------------------------------------

def parse_polygon_text(text: str) -> ConvexPolygon:
    """One ``P/Q P/Q`` vertex per line, ``#`` starts a comment."""
    pts = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PolygonError(f"line {lineno}: expected two coordinates")
        try:
            pts.append(Point2(Fraction(parts[0]), Fraction(parts[1])))
        except (ValueError, ZeroDivisionError) as exc:
            raise PolygonError(f"line {lineno}: {exc}") from None
    return validate_polygon(pts)


def format_polygon(p: ConvexPolygon) -> str:
    return "".join(f"{v.px} {v.py}\n" for v in p.vertices)
