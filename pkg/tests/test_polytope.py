import random
from fractions import Fraction

import pytest

from boxcert import catalog
from boxcert.lp import solve_square
from boxcert.model import BoxError, ProbabilityBox, mix_boxes
from boxcert.polytope import (
    FACETS,
    PARAMS,
    NDParameterization,
    check_no_disturbance,
    decompose_membership,
    enumerate_vertices,
    from_parameterization,
    to_parameterization,
)

from conftest import box_from_tri_joint, random_tri_joint


def test_facet_count():
    assert len(FACETS) == 12


def test_check_nd_deterministic(det_boxes):
    for name, box in det_boxes.items():
        assert check_no_disturbance(box).passed, name


def test_check_nd_constructed_mismatch():
    scenario = catalog.single_party_scenario()
    tables = {
        frozenset({"x1", "x2"}): {(0, 0): Fraction(1), (0, 1): Fraction(0),
                                  (1, 0): Fraction(0), (1, 1): Fraction(0)},
        frozenset({"x1", "x3"}): {(0, 0): Fraction(0), (0, 1): Fraction(0),
                                  (1, 0): Fraction(1, 2), (1, 1): Fraction(1, 2)},
        frozenset({"x2", "x3"}): {(0, 0): Fraction(1, 2), (0, 1): Fraction(1, 2),
                                  (1, 0): Fraction(0), (1, 1): Fraction(0)},
    }
    report = check_no_disturbance(ProbabilityBox(scenario, tables))
    assert not report.passed
    hit = next(v for v in report.violations if v.input == "x1" and v.output == 0)
    assert {hit.value_a, hit.value_b} == {Fraction(1), Fraction(0)}


def test_gm_marginals_all_equal():
    from boxcert.gm import gm_box
    from boxcert.model import Event, event_probability

    box = gm_box(Fraction(1, 6))
    assert check_no_disturbance(box).passed
    for lab in box.scenario.all_inputs:
        assert event_probability(box, Event.of({lab: 0})) == Fraction(5, 12)


def test_parameterization_i1(indet_boxes):
    params = to_parameterization(indet_boxes["I1"])
    assert params.vector == (
        Fraction(1, 2), Fraction(1, 2), Fraction(1, 2),
        Fraction(1, 2), Fraction(1, 2), Fraction(0),
    )


def test_parameterization_d1(det_boxes):
    assert to_parameterization(det_boxes["D1"]).vector == (1, 1, 1, 1, 1, 1)


def test_parameterization_round_trip(indet_boxes, det_boxes):
    for box in list(indet_boxes.values()) + list(det_boxes.values()):
        assert from_parameterization(to_parameterization(box)) == box


def test_enumerate_vertices_counts():
    vertices = enumerate_vertices()
    assert len(vertices) == 12
    assert sum(v.deterministic for v in vertices) == 8


def test_enumerate_vertices_matches_catalog():
    by_name = {v.name: v for v in enumerate_vertices()}
    for name, box in catalog.extremal_boxes().items():
        assert by_name[name].box() == box


def test_vertices_saturate_rank_six():
    for vertex in enumerate_vertices():
        rows = [
            [FACETS[k][1].coeff_map.get(p, Fraction(0)) for p in PARAMS]
            for k in vertex.saturated_facets
        ]
        assert len(rows) >= 6
        assert _rank(rows) == 6


def test_affine_hull_dimension_is_six():
    vectors = [v.params.vector for v in enumerate_vertices()]
    base = vectors[0]
    diffs = [[a - b for a, b in zip(vec, base)] for vec in vectors[1:]]
    assert _rank(diffs) == 6


def _rank(rows):
    rows = [list(r) for r in rows]
    rank = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = rows[rank][col]
        rows[rank] = [v / inv for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def test_enumerate_vertices_stable():
    first = enumerate_vertices()
    second = enumerate_vertices()
    assert first == second


def test_decompose_mixture(det_boxes):
    half = Fraction(1, 2)
    box = mix_boxes([(half, det_boxes["D1"]), (half, det_boxes["D8"])])
    result = decompose_membership(box)
    assert result.member
    _check_reconstruction(box, result.weights)


def test_decompose_vertex(indet_boxes):
    result = decompose_membership(indet_boxes["I2"])
    assert result.member
    assert result.weights == {"I2": Fraction(1)}


def test_decompose_random_tri_joint_boxes():
    rng = random.Random(7)
    for _ in range(10):
        box = box_from_tri_joint(random_tri_joint(rng))
        result = decompose_membership(box)
        assert result.member
        _check_reconstruction(box, result.weights)


def _check_reconstruction(box, weights):
    assert sum(weights.values(), Fraction(0)) == 1
    assert all(w >= 0 for w in weights.values())
    by_name = {v.name: v for v in enumerate_vertices()}
    target = to_parameterization(box).vector
    combo = [
        sum((w * by_name[name].params.vector[i] for name, w in weights.items()), Fraction(0))
        for i in range(6)
    ]
    assert tuple(combo) == target


def test_decompose_outside_reports_facet():
    # c12 = m1 + 1/10 breaks the "m1 - c12 >= 0" facet.
    bad = NDParameterization(
        m1=Fraction(1, 2), m2=Fraction(1, 2), m3=Fraction(1, 2),
        c12=Fraction(3, 5), c23=Fraction(1, 2), c13=Fraction(0),
    )
    name, value = bad.violated_facets()[0]
    assert name == "m1 - c12 >= 0"
    assert value == Fraction(-1, 10)


def test_deterministic_vertices_have_tri_joint(det_boxes, indet_boxes):
    from boxcert.marginal import joint_extension_feasibility

    for name, box in det_boxes.items():
        result, _ = joint_extension_feasibility(box, ("x1", "x2", "x3"))
        assert result.feasible, name
    for name, box in indet_boxes.items():
        result, _ = joint_extension_feasibility(box, ("x1", "x2", "x3"))
        assert not result.feasible, name


def test_solve_square_singular():
    one = Fraction(1)
    assert solve_square([[one, one], [one, one]], [one, one]) is None


def test_to_parameterization_requires_nd():
    scenario = catalog.single_party_scenario()
    tables = {
        frozenset({"x1", "x2"}): {(0, 0): Fraction(1), (0, 1): Fraction(0),
                                  (1, 0): Fraction(0), (1, 1): Fraction(0)},
        frozenset({"x1", "x3"}): {(0, 0): Fraction(0), (0, 1): Fraction(0),
                                  (1, 0): Fraction(0), (1, 1): Fraction(1)},
        frozenset({"x2", "x3"}): {(0, 0): Fraction(1), (0, 1): Fraction(0),
                                  (1, 0): Fraction(0), (1, 1): Fraction(0)},
    }
    with pytest.raises(BoxError, match="no-disturbance"):
        to_parameterization(ProbabilityBox(scenario, tables))
