import hashlib
import json
from fractions import Fraction
from pathlib import Path

import pytest

from xraypent import curve_solver as cs
from xraypent import paper_system as ps
from xraypent.eliminate import LinearSolution, substitute_linear
from xraypent.polycore import (
    MultiPoly,
    coefficients_in,
    degree_in,
    eval_exact,
    format_poly,
    parse_poly,
    primitive_part,
)

GOLDEN = Path(__file__).parent / "golden"
P = parse_poly
TRANSCRIPTION_SHA256 = "0f007b790555d9ee8ff9dcc6dc4a09f24710275d0927d926cda80fa04d8f28c0"
ALL_NAMES = ["P1", "P2", "P3", "P4", "P5", "P6", "Q1", "Q2", "Q3", "R1", "R2"]


# -- transcription ---------------------------------------------------------------------

def test_transcription_checksum():
    blob = "\n".join(format_poly(ps.equation(n)) for n in ALL_NAMES)
    assert hashlib.sha256(blob.encode()).hexdigest() == TRANSCRIPTION_SHA256


def test_pentagon_system_shape():
    system = ps.pentagon_system()
    assert [e.label for e in system] == ["B1B5", "C1C5", "D1D5", "E2A2", "E3A3", "E4A4"]
    assert sum(len(e.nonvanishing) for e in system) == 9
    assert all(not e.poly.is_zero() for e in system)
    assert all(not s.is_zero() for e in system for s in e.nonvanishing)


def test_pentagon_equation_examples():
    p2 = ps.equation("P2")
    assert p2 == P("u + w - x")
    assert all(degree_in(p2, v) == 1 for v in "uwx")
    assert ps.equation("P6") == P("z*w - y*u - v*w")
    pt = {"u": Fraction(1, 4), "v": 0, "w": Fraction(1, 4), "x": Fraction(1, 2),
          "y": Fraction(1, 4), "z": 0}
    assert eval_exact(ps.equation("P1"), pt) == 0


def test_direction_labels_alias_equation_names():
    for i, label in enumerate(["B1B5", "C1C5", "D1D5", "E2A2", "E3A3", "E4A4"], 1):
        assert ps.equation(label) == ps.equation(f"P{i}")
    with pytest.raises(KeyError):
        ps.equation("P7")


def test_derived_stage_examples():
    q1 = ps.equation("Q1")
    assert coefficients_in(q1, "v")[1] == P("y - 3*y*u + y*u^2 - 3*x*y + 3*x*y*u + u")
    r1_const = coefficients_in(ps.equation("R1"), "u")[0]
    assert r1_const.coefficient({"x": 6, "y": 4}) == 16
    r2_top = coefficients_in(ps.equation("R2"), "u")[-1]
    assert r2_top == P("-y")
    assert ps.stage_degrees() == {"Q1/v": 1, "Q2/v": 2, "Q3/v": 2, "R1/u": 6, "R2/u": 7}


# -- stage 1: eliminating z and w ---------------------------------------------------------

def test_zw_images_are_free_of_z_and_w():
    images = ps.eliminate_zw()
    assert set(images) == {"B1B5", "D1D5", "E2A2", "E3A3"}
    for img in images.values():
        assert degree_in(img, "z") <= 0 and degree_in(img, "w") <= 0


def test_first_image_matches_hand_expansion():
    img = ps.eliminate_zw()["B1B5"]
    assert primitive_part(img) == primitive_part(P("x - u - x*v + u*v - 2*x*y"))


def test_fifth_image_factors_after_substituting_v():
    # y * (x - u) * (...) must vanish, which leaves no admissible pentagon
    images = ps.eliminate_zw()
    sol = LinearSolution.from_poly(images["B1B5"], "v")
    reduced = substitute_linear(images["E3A3"], sol)
    assert sol.a_coef == P("u - x")
    assert reduced == P("y") * P("x - u") ** 2 * P("2*u*x - u + x^2 - 3*x + 1")


def test_pentagon_sampling_finds_nothing():
    res = cs.sample_solutions(5, 1, chain=cs.chain_for_stage("P"), max_attempts=40)
    assert res.tuples == []
    assert not res.complete
    assert res.attempts == 40


def test_stage1_comparison_reports_sampling_failure():
    images = ps.eliminate_zw()
    with pytest.raises(ps.SamplingError):
        ps.compare_with_paper(images["B1B5"], ps.equation("Q1"), 5, 1, sampler=lambda n, s: [])


# -- stage 2: eliminating v ----------------------------------------------------------------------

def test_v_eliminant_of_q3_is_y_times_r2():
    s3 = ps.eliminate_v()["Q3"]
    assert s3 == P("y") * ps.equation("R2")


def test_v_eliminant_of_q2_differs_from_r1_in_one_term():
    s2 = ps.eliminate_v()["Q2"]
    assert s2 == ps.equation("R1") + P("14*u^5*x*y^2")
    assert s2 == ps.corrected_r1()
    assert substitute_linear(ps.equation("Q2"), ps.q1_v_solution()) == s2


def test_stage2_relation_categories_golden():
    golden = json.loads((GOLDEN / "stage2_relations.json").read_text())
    computed = ps.eliminate_v()
    for src, claim in (("Q2", "R1"), ("Q3", "R2")):
        rep = ps.compare_with_paper(computed[src], ps.equation(claim), 100, 1, stage="Q")
        assert {"relation": rep.relation.value, "note": rep.note} == golden[claim]


# -- relation reports ---------------------------------------------------------------------------

def test_compare_examples():
    p = ps.equation("R2")
    assert ps.compare_with_paper(p, p).relation is ps.Relation.EXACT
    rep = ps.compare_with_paper(p, 3 * p)
    assert rep.relation is ps.Relation.CONSTANT_MULTIPLE and rep.detail == 3
    rep = ps.compare_with_paper(p, -p)
    assert rep.relation is ps.Relation.EXACT and rep.detail == -1


def test_compare_sample_consistent_with_custom_sampler():
    x, y = MultiPoly.var("x"), MultiPoly.var("y")
    pts = [{"x": 0.25, "y": 0.25}, {"x": 0.5, "y": 0.5}]
    rep = ps.compare_with_paper(x - y, x**3 - y**3 + x - y + (x - y) * x, 2, 1,
                                sampler=lambda n, s: pts)
    assert rep.relation in (ps.Relation.DIVIDES_COMPUTED, ps.Relation.SAMPLE_CONSISTENT)
    rep = ps.compare_with_paper(x - y, x + y - 1, 2, 1, sampler=lambda n, s: pts[1:])
    assert rep.relation is ps.Relation.SAMPLE_CONSISTENT and rep.samples_used == 1
    rep = ps.compare_with_paper(x - y, x + y - 1, 2, 1, sampler=lambda n, s: pts)
    assert rep.relation is ps.Relation.INCONSISTENT


def test_relation_report_invariants():
    with pytest.raises(ValueError):
        ps.RelationReport(ps.Relation.EXACT, 2)
    with pytest.raises(ValueError):
        ps.RelationReport(ps.Relation.SAMPLE_CONSISTENT, None, 0)
    assert ps.Relation.EXACT.at_least(ps.Relation.SAMPLE_CONSISTENT)
    assert not ps.Relation.INCONSISTENT.at_least(ps.Relation.SAMPLE_CONSISTENT)


# -- final resultant --------------------------------------------------------------------------

def test_final_resultant_shape(curve):
    assert not curve.is_zero()
    assert len(curve) == 821
    assert degree_in(curve, "x") == 42 and degree_in(curve, "y") == 41
    assert ps.monomial_content(curve) == (0, 0, 0, 7, 10, 0)
    assert curve.variables() == {"x", "y"}


def test_first_term_report(curve):
    rep = ps.check_first_term(curve)
    assert ps.FIRST_TERM_COEFF == 16**7 == 268435456
    assert rep.coefficient == 9188676188160
    assert not rep.matches
    assert rep.sign == "+"
    assert {mon for _, mon in rep.leading_terms.values()} == {(0, 0, 0, 42, 41, 0)}
    assert rep.corner_term == (16**7, (0, 0, 0, 42, 34, 0))


def test_first_term_absent_is_a_verification_failure():
    with pytest.raises(ps.VerificationError):
        ps.check_first_term(P("x + y"))


def test_corrected_r1_does_not_give_the_claimed_coefficient(cache_dir):
    res = ps._resultant_cached(ps.corrected_r1(), ps.equation("R2"), "corrected.poly", cache_dir)
    assert res.coefficient(ps.FIRST_TERM_MONOMIAL) == 704827160576


def test_final_resultant_cache_round_trip(tmp_path, curve):
    first = ps.final_resultant(tmp_path)
    assert first == curve
    assert (tmp_path / ps.FINAL_RESULTANT_FILE).exists()
    assert ps.final_resultant(tmp_path) == curve
    # a stale key forces recomputation instead of a wrong hit
    (tmp_path / (ps.FINAL_RESULTANT_FILE + ".key")).write_text("stale\n")
    (tmp_path / ps.FINAL_RESULTANT_FILE).write_text("x\n")
    assert ps.final_resultant(tmp_path) == curve


def test_q_stage_samples_lie_on_the_q_curve(cache_dir):
    qcurve = ps.stage_q_curve(cache_dir)
    res = cs.sample_solutions(20, 3, chain=cs.chain_for_stage("Q"), cache=cache_dir)
    assert len(res.tuples) == 20
    for t in res.tuples:
        assert ps.scaled_residual(qcurve, t.as_dict()) <= 1e-6
