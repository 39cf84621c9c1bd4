import random
from fractions import Fraction

import pytest

from boxcert import catalog
from boxcert.model import ProbabilityBox


@pytest.fixture(scope="session")
def det_boxes():
    return catalog.deterministic_boxes()


@pytest.fixture(scope="session")
def indet_boxes():
    return catalog.indeterministic_boxes()


@pytest.fixture(scope="session")
def w_box():
    return catalog.uniform_pair_box()


def random_rational(rng: random.Random, max_den: int = 12) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, den), den)


def random_tri_joint(rng: random.Random) -> dict[tuple[int, int, int], Fraction]:
    """A random exact distribution over the 8 assignments to (x1, x2, x3)."""
    weights = [rng.randint(0, 9) for _ in range(8)]
    if sum(weights) == 0:
        weights[rng.randrange(8)] = 1
    total = sum(weights)
    atoms = [(a, b, c) for a in range(2) for b in range(2) for c in range(2)]
    return {atom: Fraction(w, total) for atom, w in zip(atoms, weights)}


def box_from_tri_joint(joint: dict[tuple[int, int, int], Fraction]) -> ProbabilityBox:
    """Pair-context marginals of an explicit tri-joint distribution."""
    scenario = catalog.single_party_scenario()
    positions = {"x1": 0, "x2": 1, "x3": 2}
    tables = {}
    for ctx in scenario.contexts:
        labels = sorted(ctx)
        table = {}
        for outcome in scenario.outcome_tuples(ctx):
            table[outcome] = sum(
                (
                    p
                    for atom, p in joint.items()
                    if all(atom[positions[lab]] == o for lab, o in zip(labels, outcome))
                ),
                Fraction(0),
            )
        tables[ctx] = table
    return ProbabilityBox(scenario, tables)
