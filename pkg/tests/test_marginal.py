import random
from fractions import Fraction

import pytest

from boxcert import catalog
from boxcert.gm import gm_box, side_extension_box
from boxcert.marginal import (
    ExtensionProblem,
    FeasibilityResult,
    ch_all,
    ch_values,
    fine_tri_joint_conditions,
    joint_extension_feasibility,
    verify_certificate,
)
from boxcert.model import BoxError, ProbabilityBox, Scenario

from conftest import box_from_tri_joint, random_rational, random_tri_joint


def test_single_marginals_only_feasible():
    # A box whose only contexts are singletons extends via the product atoms.
    scenario = Scenario(
        parties=("p",),
        inputs={"p": ("x1", "x2")},
        outputs={"x1": 2, "x2": 2},
        contexts=(frozenset({"x1"}), frozenset({"x2"})),
    )
    box = ProbabilityBox(
        scenario,
        {
            frozenset({"x1"}): {(0,): Fraction(1, 3), (1,): Fraction(2, 3)},
            frozenset({"x2"}): {(0,): Fraction(1, 4), (1,): Fraction(3, 4)},
        },
    )
    result, problem = joint_extension_feasibility(box, ("x1", "x2"))
    assert result.feasible
    assert verify_certificate(result, problem)


def test_symmetric_point_has_tri_joint():
    c = Fraction(1, 6)
    s = (1 - 3 * c) / 6
    box = side_extension_box(s, s, s, c)
    result, problem = joint_extension_feasibility(box, ("x1", "x2", "x3"))
    assert result.feasible
    assert verify_certificate(result, problem)


def test_gm_lhv_infeasible_with_farkas():
    box = gm_box(Fraction(1, 6))
    result, problem = joint_extension_feasibility(box, box.scenario.all_inputs)
    assert not result.feasible
    assert result.farkas is not None
    assert verify_certificate(result, problem)


def test_tri_joint_marginals_always_feasible():
    rng = random.Random(99)
    for _ in range(20):
        joint = random_tri_joint(rng)
        box = box_from_tri_joint(joint)
        result, problem = joint_extension_feasibility(box, ("x1", "x2", "x3"))
        assert result.feasible
        assert verify_certificate(result, problem)


def test_variable_set_must_cover_contexts(det_boxes):
    with pytest.raises(BoxError):
        joint_extension_feasibility(det_boxes["D1"], ("x1", "x2"))


def test_verify_rejects_tampered_witnesses(indet_boxes):
    box = indet_boxes["I1"]
    result, problem = joint_extension_feasibility(box, ("x1", "x2", "x3"))
    assert not result.feasible
    # A Farkas vector scaled to give y.b = 0 must be rejected.
    zero = FeasibilityResult(farkas=tuple(Fraction(0) for _ in result.farkas))
    assert not verify_certificate(zero, problem)
    # A joint with a negative atom must be rejected.
    n = len(problem.atoms)
    bad = [Fraction(0)] * n
    bad[0], bad[1] = Fraction(3, 2), Fraction(-1, 2)
    assert not verify_certificate(FeasibilityResult(joint=tuple(bad)), problem)
    # Dimension mismatches must be rejected.
    assert not verify_certificate(FeasibilityResult(joint=(Fraction(1),)), problem)


def test_fine_conditions_symmetric_point():
    for c in (Fraction(1, 12), Fraction(1, 6), Fraction(1, 3)):
        s = (1 - 3 * c) / 6
        assert fine_tri_joint_conditions(s, s, s, c).all_satisfied


def test_fine_conditions_zero_point_fails_lower_bound():
    report = fine_tri_joint_conditions(0, 0, 0, Fraction(1, 6))
    assert not report.all_satisfied
    flags = dict(report.conditions)
    assert flags["alpha + beta + gamma >= (1-3c)/2"] is False
    assert sum(1 for ok in flags.values() if not ok) == 1


def test_fine_conditions_extreme_point_tight():
    c = Fraction(1, 6)
    alpha = (1 - 3 * c) / 2
    report = fine_tri_joint_conditions(alpha, 0, 0, c)
    assert report.all_satisfied
    box = side_extension_box(alpha, Fraction(0), Fraction(0), c)
    result, _ = joint_extension_feasibility(box, ("x1", "x2", "x3"))
    assert result.feasible


def test_fine_conditions_reject_out_of_range():
    with pytest.raises(BoxError):
        fine_tri_joint_conditions(Fraction(1, 2), 0, 0, Fraction(1, 3))
    with pytest.raises(BoxError):
        fine_tri_joint_conditions(0, 0, 0, Fraction(1, 2))


def test_fine_agrees_with_lp_oracle_sampled():
    rng = random.Random(424242)
    agreements = 0
    for _ in range(200):
        c = Fraction(rng.randint(1, 12), 36)
        hi = (1 - c) / 2
        alpha, beta, gamma = (random_rational(rng) * hi for _ in range(3))
        closed_form = fine_tri_joint_conditions(alpha, beta, gamma, c).all_satisfied
        box = side_extension_box(alpha, beta, gamma, c)
        result, _ = joint_extension_feasibility(box, ("x1", "x2", "x3"))
        assert closed_form == result.feasible
        agreements += 1
    assert agreements == 200


def test_ch_canonical_variant_gm_constant():
    for c in (Fraction(1, 12), Fraction(1, 6), Fraction(1, 4), Fraction(1, 3)):
        values = ch_values(gm_box(c), 1, 2, 1, 2)
        assert values[0].settings == (1, 2, 1, 2)
        assert values[0].value == Fraction(-2, 3)


def test_ch_product_box_local():
    # Product of independent single-party distributions is local.
    scenario = catalog.chsh_scenario()
    pa = {("A.x1", 0): Fraction(1, 3), ("A.x2", 0): Fraction(2, 5)}
    pb = {("B.x1", 0): Fraction(1, 2), ("B.x2", 0): Fraction(3, 7)}
    marg = {**pa, **pb}

    def single(lab, o):
        p0 = marg[(lab, 0)]
        return p0 if o == 0 else 1 - p0

    tables = {}
    for ctx in scenario.contexts:
        labels = sorted(ctx)
        tables[ctx] = {
            (oa, ob): single(labels[0], oa) * single(labels[1], ob)
            for oa in range(2)
            for ob in range(2)
        }
    box = ProbabilityBox(scenario, tables)
    for v in ch_all(box):
        assert Fraction(-1) <= v.value <= 0


def test_ch_gm_all_variants_in_local_range():
    for c in (Fraction(1, 12), Fraction(1, 6), Fraction(1, 4), Fraction(1, 3)):
        values = ch_all(gm_box(c))
        assert len(values) == 36
        assert all(Fraction(-1) <= v.value <= 0 for v in values)


def test_ch_settings_validation():
    box = gm_box(Fraction(1, 6))
    with pytest.raises(BoxError):
        ch_values(box, 1, 1, 1, 2)
    with pytest.raises(BoxError):
        ch_values(box, 1, 4, 1, 2)


def test_extension_problem_rows_are_indicator_rows():
    box = catalog.uniform_pair_box()
    problem = ExtensionProblem.build(box, ("x1", "x2", "x3"))
    assert len(problem.atoms) == 8
    assert len(problem.matrix) == 12
    for row, event in zip(problem.matrix, problem.events):
        assert set(row) <= {Fraction(0), Fraction(1)}
        assert sum(row) == 2 ** (3 - len(event.input_set))
