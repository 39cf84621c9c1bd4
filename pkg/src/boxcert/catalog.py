"""Fixed scenarios and named boxes used throughout the analyses.

Single-party three-input scenario: inputs x1, x2, x3, binary outputs,
the three pair contexts declared.  The catalog holds its 8 deterministic
extremal boxes D1..D8, the 4 indeterministic ones I1..I4, the uniform
box W, and the bipartite CHSH scenario with the PR box.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .model import ProbabilityBox, Scenario

X1, X2, X3 = "x1", "x2", "x3"
PAIR_CONTEXTS = (frozenset({X1, X2}), frozenset({X2, X3}), frozenset({X1, X3}))


def single_party_scenario() -> Scenario:
    return Scenario(
        parties=("p",),
        inputs={"p": (X1, X2, X3)},
        outputs={X1: 2, X2: 2, X3: 2},
        contexts=PAIR_CONTEXTS,
    )


def deterministic_box(outputs: tuple[int, int, int]) -> ProbabilityBox:
    """The box assigning a definite output to each of x1, x2, x3."""
    scenario = single_party_scenario()
    value = dict(zip((X1, X2, X3), outputs))
    tables = {}
    for ctx in scenario.contexts:
        labels = sorted(ctx)
        wanted = tuple(value[lab] for lab in labels)
        tables[ctx] = {
            outcome: Fraction(1 if outcome == wanted else 0)
            for outcome in scenario.outcome_tuples(ctx)
        }
    return ProbabilityBox(scenario, tables)


# Assignment order matching the deterministic-box catalog D1..D8.
_DET_ASSIGNMENTS = [
    (0, 0, 0),
    (0, 0, 1),
    (0, 1, 0),
    (1, 0, 0),
    (0, 1, 1),
    (1, 0, 1),
    (1, 1, 0),
    (1, 1, 1),
]

# Indeterministic boxes: per pair context, the two outcome pairs carrying 1/2.
_INDET_SUPPORTS = {
    "I1": {(X1, X2): "eq", (X2, X3): "eq", (X1, X3): "ne"},
    "I2": {(X1, X2): "eq", (X2, X3): "ne", (X1, X3): "eq"},
    "I3": {(X1, X2): "ne", (X2, X3): "eq", (X1, X3): "eq"},
    "I4": {(X1, X2): "ne", (X2, X3): "ne", (X1, X3): "ne"},
}


def deterministic_boxes() -> dict[str, ProbabilityBox]:
    return {f"D{i+1}": deterministic_box(a) for i, a in enumerate(_DET_ASSIGNMENTS)}


def indeterministic_boxes() -> dict[str, ProbabilityBox]:
    scenario = single_party_scenario()
    half = Fraction(1, 2)
    boxes = {}
    for name, supports in _INDET_SUPPORTS.items():
        tables = {}
        for pair, kind in supports.items():
            ctx = frozenset(pair)
            table = {}
            for outcome in scenario.outcome_tuples(ctx):
                same = outcome[0] == outcome[1]
                on = same if kind == "eq" else not same
                table[outcome] = half if on else Fraction(0)
            tables[ctx] = table
        boxes[name] = ProbabilityBox(scenario, tables)
    return boxes


def extremal_boxes() -> dict[str, ProbabilityBox]:
    boxes = deterministic_boxes()
    boxes.update(indeterministic_boxes())
    return boxes


def uniform_pair_box() -> ProbabilityBox:
    """The completely random box W on the single-party scenario."""
    scenario = single_party_scenario()
    q = Fraction(1, 4)
    return ProbabilityBox(
        scenario,
        {ctx: {o: q for o in scenario.outcome_tuples(ctx)} for ctx in scenario.contexts},
    )


def chsh_scenario() -> Scenario:
    """Two parties, two binary inputs each, only the four cross contexts."""
    a = ("A.x1", "A.x2")
    b = ("B.x1", "B.x2")
    return Scenario(
        parties=("A", "B"),
        inputs={"A": a, "B": b},
        outputs={lab: 2 for lab in a + b},
        contexts=tuple(frozenset({xa, xb}) for xa in a for xb in b),
    )


def pr_box() -> ProbabilityBox:
    """Popescu-Rohrlich box: outputs satisfy a XOR b = x.y, uniformly."""
    scenario = chsh_scenario()
    half = Fraction(1, 2)
    tables = {}
    for ctx in scenario.contexts:
        labels = sorted(ctx)  # A.* sorts before B.*
        xa = int(labels[0][-1]) - 1
        xb = int(labels[1][-1]) - 1
        table = {}
        for oa, ob in itertools.product(range(2), range(2)):
            hit = (oa ^ ob) == (xa & xb)
            table[(oa, ob)] = half if hit else Fraction(0)
        tables[ctx] = table
    return ProbabilityBox(scenario, tables)
