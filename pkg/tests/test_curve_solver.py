import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xraypent import curve_solver as cs
from xraypent import paper_system as ps
from xraypent.polycore import MultiPoly, eval_exact, eval_float, parse_poly

P = parse_poly


# -- real roots --------------------------------------------------------------------------

def test_real_roots_examples():
    assert cs.real_roots([1, 0, -0.25], 0, 1) == pytest.approx([0.5], abs=1e-15)
    assert cs.real_roots([1, 0, 1], -10, 10) == []
    assert cs.real_roots([3.0], 0, 1) == []


def test_real_roots_errors():
    with pytest.raises(ValueError):
        cs.real_roots([0, 0], 0, 1)
    with pytest.raises(ValueError):
        cs.real_roots([1, 1], 1, 0)


def test_double_root_reported_once():
    roots = cs.real_roots([1, -1, 0.25], 0, 1)  # (t - 1/2)^2
    assert roots == pytest.approx([0.5], abs=1e-7)


def test_random_quintics_match_companion_matrix():
    rng = np.random.default_rng(0)
    for _ in range(200):
        coeffs = rng.integers(-20, 21, size=6).astype(float)
        if coeffs[0] == 0:
            coeffs[0] = 1
        bound = cs.root_bound(coeffs)
        eig = np.roots(coeffs)
        expected = sorted(r.real for r in eig if abs(r.imag) <= 1e-9 * max(1, abs(r)))
        got = cs.real_roots(coeffs, -bound, bound)
        assert len(got) == len(expected)
        assert got == pytest.approx(expected, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=2, max_size=8).filter(lambda c: c[0] != 0))
def test_no_sign_change_is_missed(coeffs):
    lo, hi = -3.0, 3.0
    roots = cs.real_roots(coeffs, lo, hi)
    ts = np.linspace(lo, hi, 10_001)
    vals = np.polyval(np.array(coeffs, float), ts)
    for k in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        assert any(ts[k] - 1e-9 <= r <= ts[k + 1] + 1e-9 for r in roots)


def test_root_bound_contains_roots():
    coeffs = [2, -3, -11, 6]
    bound = cs.root_bound(coeffs)
    assert all(abs(r) <= bound for r in np.roots(coeffs))


# -- validation -----------------------------------------------------------------------------

def test_validate_partial_solution():
    t = cs.ParameterTuple(0.25, 0.0, 0.25, 0.5, 0.25, 0.0)
    rep = cs.validate_tuple(t)
    res = dict(zip(rep.labels, rep.residuals))
    assert res["B1B5"] == 0 and res["C1C5"] == 0
    assert res["E4A4"] == pytest.approx(1 / 16)
    exact = {"u": Fraction(1, 4), "v": 0, "w": Fraction(1, 4), "x": Fraction(1, 2),
             "y": Fraction(1, 4), "z": 0}
    assert eval_exact(ps.equation("P6"), exact) == Fraction(-1, 16)
    assert not rep.in_range["v"] and not rep.in_range["z"]
    assert rep.in_range["u"] and rep.in_range["x"]
    assert not rep.all_in_range


def test_validate_all_zero_tuple():
    rep = cs.validate_tuple(cs.ParameterTuple(0, 0, 0, 0, 0, 0))
    res = dict(zip(rep.labels, rep.residuals))
    assert res["D1D5"] == 1
    assert "E4A4:u + w" in rep.flagged_sides()
    assert not rep.ok()


def test_parameter_tuple_must_be_finite():
    with pytest.raises(ValueError):
        cs.ParameterTuple(0, 0, math.nan, 0, 0, 0)


# -- back-solving ------------------------------------------------------------------------------

def test_back_solve_far_from_curve_is_empty():
    curve = ps.final_resultant()
    assert abs(eval_float(curve, {"x": 0.5, "y": 0.9})) > 1
    assert len(cs.back_solve(0.5, 0.9)) == 0


def test_back_solve_reports_degenerate_roots():
    v = MultiPoly.var("v")
    vanishing_a = cs.SolveChain("t1", (P("2*u - 1"), P("2*u - 1")), P("u - x") * v + 1, ())
    out = cs.back_solve(0.5, 0.25, vanishing_a)
    assert len(out) == 0 and "v-coefficient vanishes" in out.skipped[0]
    zero_w = cs.SolveChain("t2", (P("2*u - 1"), P("2*u - 1")), v - 1, ())
    out = cs.back_solve(0.5, 0.25, zero_w)
    assert len(out) == 0 and "w = x - u vanishes" in out.skipped[0]


def test_back_solve_construction_identities():
    curve = ps.final_resultant()
    pts = cs.trace_curve(curve, 64)
    checked = 0
    for p in pts[::7]:
        for t in cs.back_solve(p.cx, p.cy).tuples:
            assert abs(t.w - (t.x - t.u)) <= 1e-14
            assert abs(eval_float(ps.equation("P6"), t.as_dict())) <= 1e-12
            checked += 1
    assert checked > 0


def test_back_solved_points_lie_on_the_curve():
    curve = ps.final_resultant()
    pts = cs.trace_curve(curve, 64)
    for p in pts[::11]:
        if cs.back_solve(p.cx, p.cy).solutions:
            assert ps.scaled_residual(curve, {"x": p.cx, "y": p.cy}) <= 1e-6


# -- sampling ----------------------------------------------------------------------------------

def test_q_stage_sampling():
    res = cs.sample_solutions(10, 7, chain=cs.chain_for_stage("Q"))
    assert len(res.tuples) == 10 and res.complete
    for t, rep in zip(res.tuples, res.reports):
        assert rep.max_residual <= 1e-10
        assert rep.min_side_margin >= cs.SIDE_MARGIN
        assert abs(t.w - (t.x - t.u)) <= 1e-14
        assert abs(eval_float(ps.equation("P6"), t.as_dict())) <= 1e-12


def test_q_stage_sampling_is_seeded():
    a = cs.sample_solutions(3, 5, chain=cs.chain_for_stage("Q"))
    b = cs.sample_solutions(3, 5, chain=cs.chain_for_stage("Q"))
    assert a.tuples == b.tuples


@pytest.mark.xfail(strict=True, reason="the pentagon system has no admissible solutions")
def test_pentagon_sampling_example():
    res = cs.sample_solutions(10, 7)
    assert len(res.tuples) == 10
    assert all(r.max_residual <= 1e-10 for r in res.reports)


def test_sampling_needs_positive_n():
    with pytest.raises(ValueError):
        cs.sample_solutions(0, 1)


# -- tracing -----------------------------------------------------------------------------------

def test_trace_quarter_circle():
    f = P("4*x^2 + 4*y^2 - 1")
    pts = cs.trace_curve(f, 64)
    assert len(pts) > 50
    for p in pts:
        assert abs(p.cx**2 + p.cy**2 - 0.25) <= 0.05
        assert abs(math.hypot(p.cx, p.cy) - 0.5) <= 1e-12


def test_trace_diagonal():
    pts = cs.trace_curve(P("x - y"), 8)
    assert pts
    assert all(abs(p.cx - p.cy) <= 1e-12 for p in pts)


def test_trace_empty_when_no_sign_change():
    assert cs.trace_curve(P("x^2 + y^2 + 1"), 16) == []


def test_trace_sorted_by_cell_and_deterministic():
    f = P("4*x^2 + 4*y^2 - 1")
    a = cs.trace_curve(f, 128, workers=1)
    b = cs.trace_curve(f, 128, workers=3)
    assert a == b
    cells = [p.cell for p in a]
    assert cells == sorted(cells)


def test_trace_custom_domain():
    pts = cs.trace_curve(P("x - y"), 10, (-1, 1, -1, 1))
    assert min(p.cx for p in pts) < 0 < max(p.cx for p in pts)


def test_trace_errors():
    with pytest.raises(ValueError):
        cs.trace_curve(P("x"), 1)
    with pytest.raises(ValueError):
        cs.trace_curve(MultiPoly(), 8)
    with pytest.raises(ValueError):
        cs.trace_curve(P("x + u"), 8)
    with pytest.raises(ValueError):
        cs.Domain(1, 0, 0, 1)
