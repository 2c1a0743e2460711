"""The two-pentagon equation system and its elimination chain.

The six direction equations, the three stage-one eliminants (Q1-Q3) and the
two stage-two eliminants (R1, R2) are stored exactly as printed.  The
functions here recompute each elimination stage and record how the computed
polynomials relate to the printed ones, rather than replacing them.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping, Sequence

from xraypent import cache as _cache
from xraypent.eliminate import LinearSolution, resultant, substitute_linear
from xraypent.equations import PENTAGON_EQUATIONS, STAGE1_BLOCKS, STAGE2_BLOCKS
from xraypent.polycore import (
    MonomialOrder,
    MultiPoly,
    coefficients_in,
    degree_in,
    eval_float,
    format_poly,
    integer_content,
    leading_term,
    parse_poly,
    poly_sum,
    primitive_part,
    try_exact_div,
)

log = logging.getLogger(__name__)

FIRST_TERM_COEFF = 16**7
FIRST_TERM_MONOMIAL = (0, 0, 0, 42, 34, 0)
SAMPLE_TOL = 1e-9
RESULTANT_BACKEND = "interp"
FINAL_RESULTANT_FILE = "final_resultant.poly"
STAGE_Q_CURVE_FILE = "stage_q_curve.poly"


class VerificationError(RuntimeError):
    """A claim about the printed equations failed to verify."""


class SamplingError(RuntimeError):
    """No solutions of the ambient system could be sampled."""


class DirectionLabel(str, enum.Enum):
    B1B5 = "B1B5"
    C1C5 = "C1C5"
    D1D5 = "D1D5"
    E2A2 = "E2A2"
    E3A3 = "E3A3"
    E4A4 = "E4A4"


@dataclass(frozen=True)
class SystemEquation:
    label: str
    poly: MultiPoly
    nonvanishing: tuple[MultiPoly, ...] = ()

    def __post_init__(self):
        if self.poly.is_zero():
            raise ValueError(f"{self.label}: equation polynomial is zero")
        if any(p.is_zero() for p in self.nonvanishing):
            raise ValueError(f"{self.label}: side condition is identically zero")


def _from_blocks(blocks: Sequence[tuple[int, str]], var: str) -> MultiPoly:
    return poly_sum(parse_poly(text) * MultiPoly.var(var, k) for k, text in blocks)


def pentagon_system() -> list[SystemEquation]:
    """P1-P6 with their nonvanishing side conditions, in printed order."""
    return [
        SystemEquation(label, parse_poly(eq), tuple(parse_poly(s) for s in sides))
        for label, (eq, sides) in PENTAGON_EQUATIONS.items()
    ]


def derived_stage1() -> list[SystemEquation]:
    return [SystemEquation(name, _from_blocks(b, "v")) for name, b in STAGE1_BLOCKS.items()]


def derived_stage2() -> list[SystemEquation]:
    return [SystemEquation(name, _from_blocks(b, "u")) for name, b in STAGE2_BLOCKS.items()]


def equation(name: str) -> MultiPoly:
    """Look up P1..P6, Q1..Q3, R1, R2 or a direction label."""
    labels = list(PENTAGON_EQUATIONS)
    if name.startswith("P") and name[1:].isdigit() and 1 <= int(name[1:]) <= len(labels):
        name = labels[int(name[1:]) - 1]
    for eq in pentagon_system() + derived_stage1() + derived_stage2():
        if eq.label == name:
            return eq.poly
    raise KeyError(name)


def corrected_r1() -> MultiPoly:
    """R1 with the u^5*x*y^2 coefficient that follows from Q1 and Q2 (+3, printed -11).

    Diagnostic only; every paper-facing check uses the printed R1.
    """
    return equation("R1") + MultiPoly.monomial(14, u=5, x=1, y=2)


# -- stage one: z and w ----------------------------------------------------------

def zw_solutions() -> tuple[LinearSolution, LinearSolution]:
    """w from P2 (w = x - u) and z from P6 after w has been substituted."""
    p2 = equation("C1C5")
    w_sol = LinearSolution.from_poly(p2, "w")
    p6 = substitute_linear(equation("E4A4"), w_sol)
    z_sol = LinearSolution.from_poly(p6, "z")
    return w_sol, z_sol


def eliminate_zw() -> dict[str, MultiPoly]:
    """Images of P1, P3, P4, P5 after eliminating w and z, content-normalised.

    Assumes w = x - u is nonzero (z is recovered by dividing by it).
    """
    w_sol, z_sol = zw_solutions()
    out = {}
    for label in ("B1B5", "D1D5", "E2A2", "E3A3"):
        p = substitute_linear(equation(label), w_sol)
        p = substitute_linear(p, z_sol)
        out[label] = primitive_part(p)
    return out


# -- stage two: v ----------------------------------------------------------------

def q1_v_solution() -> LinearSolution:
    return LinearSolution.from_poly(equation("Q1"), "v")


def eliminate_v() -> dict[str, MultiPoly]:
    """Q2 and Q3 with v eliminated through Q1 (no normalisation)."""
    sol = q1_v_solution()
    return {"Q2": substitute_linear(equation("Q2"), sol),
            "Q3": substitute_linear(equation("Q3"), sol)}


# -- comparison -----------------------------------------------------------------

class Relation(str, enum.Enum):
    EXACT = "EXACT"
    CONSTANT_MULTIPLE = "CONSTANT_MULTIPLE"
    DIVIDES_COMPUTED = "DIVIDES_COMPUTED"
    SAMPLE_CONSISTENT = "SAMPLE_CONSISTENT"
    INCONSISTENT = "INCONSISTENT"

    @property
    def rank(self) -> int:
        return list(Relation).index(self)

    def at_least(self, other: "Relation") -> bool:
        return self.rank <= other.rank


@dataclass(frozen=True)
class RelationReport:
    relation: Relation
    detail: object = None
    samples_used: int = 0
    max_residual: float = 0.0
    note: str = ""

    def __post_init__(self):
        if self.relation is Relation.EXACT and self.detail not in (1, -1):
            raise ValueError("EXACT relation needs a unit constant")
        if self.relation is Relation.SAMPLE_CONSISTENT and self.samples_used < 1:
            raise ValueError("SAMPLE_CONSISTENT needs at least one sample")

    def summary(self) -> str:
        if self.relation in (Relation.EXACT, Relation.CONSTANT_MULTIPLE):
            return f"{self.relation.value} (factor {self.detail})"
        if self.relation is Relation.DIVIDES_COMPUTED:
            return f"{self.relation.value} ({self.note}, quotient {format_poly(self.detail)})"
        return (f"{self.relation.value} (samples {self.samples_used}, "
                f"max residual {self.max_residual:.3e})")


def scaled_residual(p: MultiPoly, point: Mapping[str, float]) -> float:
    """|p| / (1 + sum|c| * max(1, |point|)^deg), a dimensionless residual."""
    if p.is_zero():
        return 0.0
    val = eval_float(p, point)
    used = [abs(float(point[v])) for v in p.variables()]
    big = max([1.0] + used)
    deg = p.total_degree()
    scale = 1.0 + sum(abs(float(c)) for c in p.terms.values()) * big ** deg
    return abs(val) / scale


def constant_ratio(computed: MultiPoly, claimed: MultiPoly) -> Fraction | None:
    """``c`` with ``claimed == c * computed`` for a rational constant, else None."""
    if primitive_part(computed) != primitive_part(claimed):
        return None
    return Fraction(integer_content(claimed), integer_content(computed))


Sampler = Callable[[int, int], Sequence[Mapping[str, float]]]


def compare_with_paper(computed: MultiPoly, claimed: MultiPoly, samples: int = 100,
                       seed: int = 1, sampler: Sampler | None = None,
                       stage: str = "P", cache: str | Path | None = None) -> RelationReport:
    """Classify how a computed eliminant relates to a printed polynomial.

    Checks, in order: equality up to a constant, exact division either way,
    then joint vanishing at sampled solutions of the ambient system (the
    pentagon system for ``stage="P"``, Q1-Q3 for ``stage="Q"``).  Raises
    :class:`SamplingError` when no sample can be produced.
    """
    if computed.is_zero() or claimed.is_zero():
        raise ValueError("both polynomials must be nonzero")
    if samples < 1:
        raise ValueError("need at least one sample")
    ratio = constant_ratio(computed, claimed)
    if ratio is not None:
        if ratio in (1, -1):
            return RelationReport(Relation.EXACT, int(ratio))
        return RelationReport(Relation.CONSTANT_MULTIPLE, ratio)
    q = try_exact_div(computed, claimed)
    if q is not None:
        return RelationReport(Relation.DIVIDES_COMPUTED, q, note="claimed divides computed")
    q = try_exact_div(claimed, computed)
    if q is not None:
        return RelationReport(Relation.DIVIDES_COMPUTED, q, note="computed divides claimed")

    if sampler is None:
        sampler = stage_sampler(stage, cache)
    points = list(sampler(samples, seed))
    if not points:
        raise SamplingError(f"no solutions of the {stage}-stage system could be sampled")
    worst = 0.0
    for pt in points:
        worst = max(worst, scaled_residual(computed, pt), scaled_residual(claimed, pt))
    rel = Relation.SAMPLE_CONSISTENT if worst <= SAMPLE_TOL else Relation.INCONSISTENT
    return RelationReport(rel, None, len(points), worst)


def stage_sampler(stage: str, cache: str | Path | None = None) -> Sampler:
    from xraypent import curve_solver

    chain = curve_solver.chain_for_stage(stage)

    def run(n: int, seed: int):
        res = curve_solver.sample_solutions(n, seed, chain=chain, cache=cache)
        return [t.as_dict() for t in res.tuples]

    return run


# -- final resultant ---------------------------------------------------------------

def _resultant_cached(f: MultiPoly, g: MultiPoly, name: str, cache: str | Path | None,
                      backend: str = RESULTANT_BACKEND) -> MultiPoly:
    key = _cache.digest(format_poly(f), format_poly(g), "u", backend)
    cache_dir = _cache.resolve_cache_dir(cache)
    hit = _cache.load(cache_dir, name, key)
    if hit is not None:
        return hit
    log.info("computing resultant for %s (backend %s)", name, backend)
    res = primitive_part(resultant(f, g, "u", backend=backend))
    if res.is_zero():
        raise VerificationError("resultant vanishes identically; the curve claim fails")
    try:
        _cache.store(cache_dir, name, key, res)
    except OSError as exc:  # read-only cache is not fatal
        log.warning("could not write cache %s: %s", cache_dir, exc)
    return res


def final_resultant(cache: str | Path | None = None, backend: str = RESULTANT_BACKEND) -> MultiPoly:
    """Res_u(R1, R2), content-normalised, cached as ``final_resultant.poly``."""
    return _resultant_cached(equation("R1"), equation("R2"), FINAL_RESULTANT_FILE, cache, backend)


def stage_q_curve(cache: str | Path | None = None) -> MultiPoly:
    """Res_u(S2, R2) with S2 the v-eliminant of Q2: the projection of the Q system."""
    s2 = primitive_part(eliminate_v()["Q2"])
    return _resultant_cached(s2, equation("R2"), STAGE_Q_CURVE_FILE, cache)


def monomial_content(p: MultiPoly) -> tuple[int, ...]:
    """Exponents of the largest monomial dividing every term."""
    mons = list(p.terms)
    return tuple(min(m[i] for m in mons) for i in range(len(mons[0])))


@dataclass(frozen=True)
class FirstTermReport:
    coefficient: int
    expected: int
    matches: bool
    leading_terms: dict = field(default_factory=dict)
    corner_term: tuple[int, tuple[int, ...]] | None = None

    @property
    def sign(self) -> str:
        return "+" if self.coefficient > 0 else "-" if self.coefficient < 0 else "0"


FIRST_TERM_ORDERS = {
    "lex(x>y)": MonomialOrder("lex", ("x", "y")),
    "lex(y>x)": MonomialOrder("lex", ("y", "x")),
    "grlex(x>y)": MonomialOrder("grlex", ("x", "y")),
}


def sylvester_corner_term(f: MultiPoly, g: MultiPoly, var: str = "u") -> MultiPoly:
    """The single expansion term a0(f)^deg g * lc(g)^deg f of the Sylvester determinant."""
    fc = coefficients_in(f, var)
    gc = coefficients_in(g, var)
    m, n = len(fc) - 1, len(gc) - 1
    sign = -1 if (m * n) % 2 else 1
    return (fc[0] ** n) * (gc[-1] ** m) * sign


def check_first_term(curve: MultiPoly) -> FirstTermReport:
    """Look up the x^42*y^34 coefficient and the leading term under three orders."""
    if curve.is_zero():
        raise ValueError("curve polynomial is zero")
    coeff = curve.coefficient(FIRST_TERM_MONOMIAL)
    if coeff == 0:
        raise VerificationError("monomial x^42*y^34 is absent from the curve polynomial")
    leads = {name: leading_term(curve, order) for name, order in FIRST_TERM_ORDERS.items()}
    corner = sylvester_corner_term(equation("R1"), equation("R2"))
    top = max(corner.terms, key=FIRST_TERM_ORDERS["grlex(x>y)"].key)
    return FirstTermReport(
        coefficient=coeff,
        expected=FIRST_TERM_COEFF,
        matches=abs(coeff) == FIRST_TERM_COEFF,
        leading_terms=leads,
        corner_term=(corner.terms[top], top),
    )


def stage_degrees() -> dict[str, int]:
    return {
        "Q1/v": degree_in(equation("Q1"), "v"),
        "Q2/v": degree_in(equation("Q2"), "v"),
        "Q3/v": degree_in(equation("Q3"), "v"),
        "R1/u": degree_in(equation("R1"), "u"),
        "R2/u": degree_in(equation("R2"), "u"),
    }


__all__ = [
    "DirectionLabel",
    "FirstTermReport",
    "Relation",
    "RelationReport",
    "SamplingError",
    "SystemEquation",
    "VerificationError",
    "check_first_term",
    "compare_with_paper",
    "corrected_r1",
    "derived_stage1",
    "derived_stage2",
    "eliminate_v",
    "eliminate_zw",
    "equation",
    "final_resultant",
    "pentagon_system",
    "scaled_residual",
    "stage_q_curve",
    "sylvester_corner_term",
]
