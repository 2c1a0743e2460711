"""Sparse multivariate polynomials with integer coefficients.

Every polynomial lives over the fixed variable set ``u, v, w, x, y, z``.
A monomial is a 6-tuple of exponents in that order; a polynomial is an
immutable mapping from monomials to nonzero Python ints.

The text format understood by :func:`parse_poly` and produced by
:func:`format_poly` is::

    poly   := term (('+' | '-') term)*
    term   := coeff ('*' varpow)* | varpow ('*' varpow)*
    varpow := var ('^' uint)?

with ``var`` one of the six names and whitespace ignored.  Canonical output
lists terms in descending grlex order with ``u > v > w > x > y > z``.
"""

from __future__ import annotations

import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

VARS: tuple[str, ...] = ("u", "v", "w", "x", "y", "z")
NVARS = len(VARS)
VAR_INDEX = {name: i for i, name in enumerate(VARS)}

#: Degree of the zero polynomial.  Never use -1 for this.
NEG_INF = float("-inf")

Monomial = tuple[int, ...]
ONE_MONOMIAL: Monomial = (0,) * NVARS

Rational = Fraction


class PolySyntaxError(ValueError):
    """Raised for malformed polynomial text; ``pos`` is a 0-based offset."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


class UnknownVariableError(ValueError):
    pass


class MissingVariableError(KeyError):
    pass


def _var_index(var: str | int) -> int:
    if isinstance(var, int):
        if not 0 <= var < NVARS:
            raise UnknownVariableError(f"variable index {var} out of range")
        return var
    try:
        return VAR_INDEX[var]
    except KeyError:
        raise UnknownVariableError(f"unknown variable {var!r}") from None



class MultiPoly:
    """Immutable sparse polynomial in ``u, v, w, x, y, z`` over the integers."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        clean: dict[Monomial, int] = {}
        if terms:
            for mon, c in terms.items():
                if c:
                    if len(mon) != NVARS or any(e < 0 for e in mon):
                        raise ValueError(f"bad monomial {mon!r}")
                    clean[tuple(mon)] = int(c)
        self._terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, terms: dict[Monomial, int]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: int) -> "MultiPoly":
        return cls._from_clean({ONE_MONOMIAL: int(c)} if c else {})

    @classmethod
    def var(cls, name: str | int, power: int = 1) -> "MultiPoly":
        i = _var_index(name)
        mon = [0] * NVARS
        mon[i] = power
        return cls._from_clean({tuple(mon): 1})

    @classmethod
    def monomial(cls, coeff: int, **powers: int) -> "MultiPoly":
        mon = [0] * NVARS
        for name, e in powers.items():
            mon[_var_index(name)] = e
        return cls._from_clean({tuple(mon): coeff} if coeff else {})

    # -- structure ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONOMIAL in self._terms)

    def constant_value(self) -> int:
        return self._terms.get(ONE_MONOMIAL, 0)

    def coefficient(self, mon: Monomial | Mapping[str, int]) -> int:
        if isinstance(mon, Mapping):
            m = [0] * NVARS
            for name, e in mon.items():
                m[_var_index(name)] = e
            mon = tuple(m)
        return self._terms.get(tuple(mon), 0)

    def variables(self) -> set[str]:
        used = set()
        for mon in self._terms:
            for i, e in enumerate(mon):
                if e:
                    used.add(VARS[i])
        return used

    def total_degree(self) -> int | float:
        if not self._terms:
            return NEG_INF
        return max(sum(m) for m in self._terms)

    def max_abs_coeff(self) -> int:
        return max((abs(c) for c in self._terms.values()), default=0)

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._from_clean({m: -c for m, c in self._terms.items()})

    def __add__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MultiPoly._from_clean(out)

    __radd__ = __add__

    def __sub__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return (-self) + other

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            if not other:
                return ZERO
            return MultiPoly._from_clean({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[Monomial, int] = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(p + q for p, q in zip(ma, mb))
                out[m] = get(m, 0) + ca * cb
        return MultiPoly._from_clean({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- presentation -------------------------------------------------------

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)!r})"


ZERO = MultiPoly()
ONE = MultiPoly.const(1)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: ``lex`` or ``grlex`` with a variable precedence."""

    kind: str = "grlex"
    precedence: tuple[str, ...] = VARS

    def __post_init__(self):
        if self.kind not in ("lex", "grlex"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        prec = tuple(self.precedence)
        # A partial precedence is completed with the remaining variables.
        rest = tuple(v for v in VARS if v not in prec)
        full = prec + rest
        if sorted(full) != sorted(VARS) or len(set(prec)) != len(prec):
            raise ValueError(f"precedence {self.precedence!r} is not a permutation of {VARS}")
        object.__setattr__(self, "precedence", full)

    def key(self, mon: Monomial) -> tuple:
        permuted = tuple(mon[VAR_INDEX[v]] for v in self.precedence)
        if self.kind == "lex":
            return permuted
        return (sum(mon), permuted)


GRLEX = MonomialOrder("grlex", VARS)
LEX = MonomialOrder("lex", VARS)


# -- parsing / formatting ------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


def parse_poly(text: str) -> MultiPoly:
    """Parse polynomial text into a :class:`MultiPoly`.

    >>> parse_poly("x^2*y - 2*x")
    MultiPoly('x^2*y - 2*x')
    """
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def fail(msg, tok):
        raise PolySyntaxError(msg, text, tok[2])

    def parse_varpow(mon):
        nonlocal i
        kind, val, pos = tokens[i]
        if kind != "name":
            fail("expected variable", tokens[i])
        if val not in VAR_INDEX:
            raise UnknownVariableError(f"unknown variable {val!r} at position {pos}")
        i += 1
        e = 1
        if peek()[:2] == ("op", "^"):
            i += 1
            kind, num, _ = tokens[i]
            if kind != "int":
                fail("expected exponent", tokens[i])
            e = int(num)
            if e > sys.maxsize:
                raise OverflowError(f"exponent {num} exceeds index range at position {pos}")
            i += 1
        mon[VAR_INDEX[val]] += e
        if mon[VAR_INDEX[val]] > sys.maxsize:
            raise OverflowError(f"exponent overflow at position {pos}")

    def parse_term(sign):
        nonlocal i
        mon = [0] * NVARS
        coeff = 1
        kind, val, _ = peek()
        # a coefficient may carry its own sign, e.g. "x + -3*y"
        if kind == "op" and val in "+-" and tokens[i + 1][0] == "int":
            if val == "-":
                sign = -sign
            i += 1
            kind, val, _ = peek()
        if kind == "int":
            coeff = int(val)
            i += 1
            if peek()[:2] == ("op", "*"):
                i += 1
                parse_varpow(mon)
            else:
                return sign * coeff, tuple(mon)
        elif kind == "name":
            parse_varpow(mon)
        else:
            fail("expected term", peek())
        while peek()[:2] == ("op", "*"):
            i += 1
            parse_varpow(mon)
        return sign * coeff, tuple(mon)

    terms: dict[Monomial, int] = {}
    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if peek()[1] == "-" else 1
        i += 1
    while True:
        c, mon = parse_term(sign)
        terms[mon] = terms.get(mon, 0) + c
        kind, val, _ = peek()
        if kind == "end":
            break
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            i += 1
            continue
        fail("unexpected token", peek())
    return MultiPoly(terms)


def _format_monomial(mon: Monomial) -> str:
    parts = []
    for name, e in zip(VARS, mon):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: MultiPoly, order: MonomialOrder = GRLEX) -> str:
    """Canonical text form (descending grlex unless another order is given)."""
    if not p.terms:
        return "0"
    out = []
    for mon in sorted(p.terms, key=order.key, reverse=True):
        c = p.terms[mon]
        body = _format_monomial(mon)
        mag = abs(c)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if not out:
            out.append(("-" if c < 0 else "") + text)
        else:
            out.append((" - " if c < 0 else " + ") + text)
    return "".join(out)


# -- functional ring interface -------------------------------------------------

def add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a + b


def mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def neg(a: MultiPoly) -> MultiPoly:
    return -a


def sub(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a - b


# -- evaluation ----------------------------------------------------------------

def _powers_needed(p: MultiPoly) -> list[int]:
    top = [0] * NVARS
    for mon in p.terms:
        for i, e in enumerate(mon):
            if e > top[i]:
                top[i] = e
    return top


def _assignment_vector(p: MultiPoly, assignment: Mapping[str, object]) -> tuple[list[int], list]:
    top = _powers_needed(p)
    values = []
    for i, name in enumerate(VARS):
        if top[i]:
            if name not in assignment:
                raise MissingVariableError(f"assignment lacks variable {name!r}")
            values.append(assignment[name])
        else:
            values.append(None)
    return top, values


def eval_exact(p: MultiPoly, assignment: Mapping[str, int | Fraction]) -> Fraction:
    """Evaluate exactly at rational values; returns a :class:`Fraction`."""
    if not p.terms:
        return Fraction(0)
    top, values = _assignment_vector(p, assignment)
    # Scale every term to the common denominator prod(den_i ** top_i) so the
    # sum stays in integers.
    num_pows = [None] * NVARS
    den_pows = [None] * NVARS
    den = 1
    for i in range(NVARS):
        if top[i]:
            val = Fraction(values[i])
            a, b = val.numerator, val.denominator
            num_pows[i] = [a**k for k in range(top[i] + 1)]
            den_pows[i] = [b**k for k in range(top[i] + 1)]
            den *= den_pows[i][top[i]]
    total = 0
    for mon, c in p.terms.items():
        t = c
        for i, e in enumerate(mon):
            if top[i]:
                t *= num_pows[i][e] * den_pows[i][top[i] - e]
        total += t
    return Fraction(total, den)


def eval_float(p: MultiPoly, assignment: Mapping[str, float]) -> float:
    """Term-wise binary64 evaluation, summed with :func:`math.fsum`.

    Not exact: each term carries a few ulps of rounding, so the error is
    bounded relative to the sum of absolute term values, not the result.
    """
    if not p.terms:
        return 0.0
    top, values = _assignment_vector(p, assignment)
    powers = []
    for i in range(NVARS):
        if top[i]:
            val = float(values[i])
            pw = [1.0]
            for _ in range(top[i]):
                pw.append(pw[-1] * val)
            powers.append(pw)
        else:
            powers.append(None)
    parts = []
    for mon, c in p.terms.items():
        t = float(c)
        for i, e in enumerate(mon):
            if e:
                t *= powers[i][e]
        parts.append(t)
    return math.fsum(parts)


def eval_scale(p: MultiPoly, assignment: Mapping[str, float]) -> float:
    """Sum of absolute term values at a point; the natural error scale."""
    top, values = _assignment_vector(p, assignment)
    total = 0.0
    for mon, c in p.terms.items():
        t = abs(float(c))
        for i, e in enumerate(mon):
            if e:
                t *= abs(float(values[i])) ** e
        total += t
    return total


def partial_eval(p: MultiPoly, assignment: Mapping[str, int]) -> MultiPoly:
    """Substitute integer values for some variables, keeping the rest symbolic."""
    fixed = {VAR_INDEX[k]: int(v) for k, v in assignment.items()}
    out: dict[Monomial, int] = {}
    for mon, c in p.terms.items():
        m = list(mon)
        for i, val in fixed.items():
            if m[i]:
                c *= val ** m[i]
                m[i] = 0
        if c:
            key = tuple(m)
            out[key] = out.get(key, 0) + c
    return MultiPoly(out)


def specialize(p: MultiPoly, var: str, assignment: Mapping[str, int | Fraction]) -> list[Fraction]:
    """Evaluate every variable except ``var``; return ascending Fraction coefficients."""
    coeffs = coefficients_in(p, var)
    return [eval_exact(c, assignment) for c in coeffs]


# -- structural queries --------------------------------------------------------

def derivative(p: MultiPoly, var: str) -> MultiPoly:
    """Formal partial derivative with respect to ``var``."""
    i = _var_index(var)
    out = {}
    for mon, c in p.terms.items():
        e = mon[i]
        if e:
            m = list(mon)
            m[i] = e - 1
            out[tuple(m)] = c * e
    return MultiPoly(out)


def degree_in(p: MultiPoly, var: str) -> int | float:
    i = _var_index(var)
    if not p.terms:
        return NEG_INF
    return max(m[i] for m in p.terms)


def coefficients_in(p: MultiPoly, var: str) -> list[MultiPoly]:
    """Coefficients of ``p`` viewed as a polynomial in ``var``, ascending powers."""
    i = _var_index(var)
    if not p.terms:
        return []
    d = max(m[i] for m in p.terms)
    buckets: list[dict[Monomial, int]] = [dict() for _ in range(d + 1)]
    for mon, c in p.terms.items():
        k = mon[i]
        m = list(mon)
        m[i] = 0
        buckets[k][tuple(m)] = c
    return [MultiPoly._from_clean(b) for b in buckets]


def from_coefficients(coeffs: Sequence[MultiPoly], var: str) -> MultiPoly:
    """Inverse of :func:`coefficients_in`."""
    i = _var_index(var)
    out: dict[Monomial, int] = {}
    for k, c in enumerate(coeffs):
        for mon, a in c.terms.items():
            m = list(mon)
            m[i] += k
            out[tuple(m)] = out.get(tuple(m), 0) + a
    return MultiPoly(out)


def leading_term(p: MultiPoly, order: MonomialOrder = GRLEX) -> tuple[int, Monomial]:
    if not p.terms:
        raise ValueError("zero polynomial has no leading term")
    mon = max(p.terms, key=order.key)
    return p.terms[mon], mon


def integer_content(p: MultiPoly) -> int:
    """Signed gcd of coefficients; the sign makes the primitive part grlex-positive."""
    if not p.terms:
        return 0
    g = 0
    for c in p.terms.values():
        g = math.gcd(g, c)
    lc, _ = leading_term(p, GRLEX)
    return g if lc > 0 else -g


def primitive_part(p: MultiPoly) -> MultiPoly:
    if not p.terms:
        return p
    g = integer_content(p)
    return MultiPoly._from_clean({m: c // g for m, c in p.terms.items()})


def try_exact_div(p: MultiPoly, d: MultiPoly) -> MultiPoly | None:
    """Return ``q`` with ``q * d == p``, or ``None`` if no polynomial quotient exists."""
    if not d.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if not p.terms:
        return ZERO
    # Division in lex order; with exact divisibility the leading term of the
    # running remainder is always a multiple of lt(d).
    dm = max(d.terms)
    dc = d.terms[dm]
    rest = [(m, c) for m, c in d.terms.items() if m != dm]
    r = dict(p.terms)
    q: dict[Monomial, int] = {}
    while r:
        m = max(r)
        c = r[m]
        if c % dc:
            return None
        qm = tuple(a - b for a, b in zip(m, dm))
        if any(e < 0 for e in qm):
            return None
        qc = c // dc
        q[qm] = qc
        del r[m]
        for om, oc in rest:
            key = tuple(a + b for a, b in zip(qm, om))
            v = r.get(key, 0) - qc * oc
            if v:
                r[key] = v
            else:
                r.pop(key, None)
    return MultiPoly._from_clean(q)


def substitute(p: MultiPoly, var: str, value: MultiPoly) -> MultiPoly:
    """Compose: replace ``var`` in ``p`` by the polynomial ``value``."""
    coeffs = coefficients_in(p, var)
    result = ZERO
    for c in reversed(coeffs):
        result = result * value + c
    return result


def poly_sum(items: Iterable[MultiPoly]) -> MultiPoly:
    out: dict[Monomial, int] = {}
    for p in items:
        for m, c in p.terms.items():
            out[m] = out.get(m, 0) + c
    return MultiPoly(out)
