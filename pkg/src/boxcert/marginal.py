"""The marginal problem: joint extensions, Farkas certificates, closed-form
tri-joint conditions, and Clauser-Horne values.

`joint_extension_feasibility` decides exactly whether a global joint
distribution over a variable set reproduces all of a box's context
distributions as marginals, returning either the joint itself or a
Farkas infeasibility vector.  Both witnesses are re-checkable by direct
arithmetic via `verify_certificate` without re-solving.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lp import LPFeasible, LPInfeasible, solve_equality_feasibility, verify_farkas
from .model import (
    BoxError,
    Event,
    ProbabilityBox,
    event_probability,
    full_context_events,
)


@dataclass(frozen=True)
class ExtensionProblem:
    """Atoms are global assignments over `variables` (canonical lex order);
    one equality row per full-context event of the box, entries in {0, 1}."""

    variables: tuple[str, ...]
    atoms: tuple[tuple[int, ...], ...]
    events: tuple[Event, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Fraction, ...]

    @classmethod
    def build(cls, box: ProbabilityBox, variables: Sequence[str]) -> "ExtensionProblem":
        variables = tuple(sorted(variables))
        known = set(box.scenario.all_inputs)
        missing = set(variables) - known
        if missing:
            raise BoxError(f"variable set names undeclared inputs {sorted(missing)}")
        for ctx in box.scenario.contexts:
            if not ctx <= set(variables):
                raise BoxError(
                    f"variable set misses inputs of context {sorted(ctx)}"
                )
        atoms = tuple(
            itertools.product(*(range(box.scenario.outputs[v]) for v in variables))
        )
        events = tuple(full_context_events(box))
        matrix = []
        rhs = []
        index = {v: i for i, v in enumerate(variables)}
        for event in events:
            wanted = dict(event.assignment)
            row = tuple(
                Fraction(1)
                if all(atom[index[v]] == o for v, o in wanted.items())
                else Fraction(0)
                for atom in atoms
            )
            matrix.append(row)
            rhs.append(event_probability(box, event))
        return cls(
            variables=variables,
            atoms=atoms,
            events=events,
            matrix=tuple(matrix),
            rhs=tuple(rhs),
        )


@dataclass(frozen=True)
class FeasibilityResult:
    joint: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.joint is not None

    def joint_as_dict(self, problem: ExtensionProblem) -> dict[tuple[int, ...], Fraction]:
        if self.joint is None:
            raise BoxError("no feasible witness present")
        return {atom: p for atom, p in zip(problem.atoms, self.joint) if p != 0}


def joint_extension_feasibility(
    box: ProbabilityBox, variables: Sequence[str]
) -> tuple[FeasibilityResult, ExtensionProblem]:
    """Decide joint-extension feasibility exactly, with a verifiable witness."""
    problem = ExtensionProblem.build(box, variables)
    solved = solve_equality_feasibility(problem.matrix, problem.rhs)
    if isinstance(solved, LPFeasible):
        result = FeasibilityResult(joint=solved.x)
    else:
        assert isinstance(solved, LPInfeasible)
        result = FeasibilityResult(farkas=solved.farkas)
    if not verify_certificate(result, problem):
        raise RuntimeError("solver produced a witness that fails verification")
    return result, problem


def verify_certificate(result: FeasibilityResult, problem: ExtensionProblem) -> bool:
    """Audit a witness by direct exact arithmetic, never re-solving."""
    if result.joint is not None:
        x = result.joint
        if len(x) != len(problem.atoms):
            return False
        if any(v < 0 for v in x):
            return False
        if sum(x, Fraction(0)) != 1:
            return False
        return all(
            sum((row[j] * x[j] for j in range(len(x))), Fraction(0)) == b
            for row, b in zip(problem.matrix, problem.rhs)
        )
    if result.farkas is not None:
        if len(result.farkas) != len(problem.rhs):
            return False
        return verify_farkas(problem.matrix, problem.rhs, result.farkas)
    return False


# ---------------------------------------------------------------------------
# Closed-form tri-joint conditions for the equal-marginal pair family:
# all three pair contexts have off-diagonal entries (1-c)/2 - s and
# diagonal entries s and c + s, with s in {alpha, beta, gamma}.
# ---------------------------------------------------------------------------

_FINE_LABELS = (
    "alpha + beta + gamma >= (1-3c)/2",
    "alpha + beta - gamma <= (1-c)/2",
    "alpha + gamma - beta <= (1-c)/2",
    "beta + gamma - alpha <= (1-c)/2",
)


@dataclass(frozen=True)
class FineReport:
    conditions: tuple[tuple[str, bool], ...]

    @property
    def all_satisfied(self) -> bool:
        return all(ok for _, ok in self.conditions)


def fine_tri_joint_conditions(
    alpha: Fraction, beta: Fraction, gamma: Fraction, c: Fraction
) -> FineReport:
    """Closed-form criterion for a tri-joint extension of the pair family."""
    alpha, beta, gamma, c = map(Fraction, (alpha, beta, gamma, c))
    if not 0 < c <= Fraction(1, 3):
        raise BoxError(f"c={c} outside (0, 1/3]")
    hi = (1 - c) / 2
    for name, v in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        if not 0 <= v <= hi:
            raise BoxError(f"{name}={v} outside positivity range [0, {hi}]")
    # The lower bound plus the three triangle inequalities are the complete
    # feasibility criterion for the three-cycle marginal problem on this
    # family; agreement with the LP oracle is enforced by the test suite.
    flags = (
        alpha + beta + gamma >= (1 - 3 * c) / 2,
        alpha + beta - gamma <= hi,
        alpha + gamma - beta <= hi,
        beta + gamma - alpha <= hi,
    )
    return FineReport(conditions=tuple(zip(_FINE_LABELS, flags)))


# ---------------------------------------------------------------------------
# Clauser-Horne values for a bipartite box.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CHValue:
    settings: tuple[int, int, int, int]  # (i, i', j, j') as used in the variant
    value: Fraction


def _cross_context(box: ProbabilityBox, a_label: str, b_label: str) -> Fraction:
    return event_probability(box, Event.of({a_label: 0, b_label: 0}))


def ch_values(
    box: ProbabilityBox, i: int, i2: int, j: int, j2: int
) -> list[CHValue]:
    """All index-permutation variants of the CH expression for one quadruple.

    Each variant is P(00|i j) + P(00|i j') + P(00|i' j) - P(00|i' j')
    - P(0|i) - P(0|j); the CH inequalities hold iff every value lies in
    [-1, 0] (two bounds per variant, eight inequalities in total).
    """
    if len(box.scenario.parties) != 2:
        raise BoxError("CH values require a bipartite box")
    pa, pb = box.scenario.parties
    a_inputs, b_inputs = box.scenario.inputs[pa], box.scenario.inputs[pb]
    for idx, labels in ((i, a_inputs), (i2, a_inputs), (j, b_inputs), (j2, b_inputs)):
        if not 1 <= idx <= len(labels):
            raise BoxError(f"setting index {idx} out of range")
    if i == i2 or j == j2:
        raise BoxError("CH settings must use two distinct inputs per party")

    def a(idx):
        return a_inputs[idx - 1]

    def b(idx):
        return b_inputs[idx - 1]

    values = []
    for ia, ib in ((i, i2), (i2, i)):
        for ja, jb in ((j, j2), (j2, j)):
            value = (
                _cross_context(box, a(ia), b(ja))
                + _cross_context(box, a(ia), b(jb))
                + _cross_context(box, a(ib), b(ja))
                - _cross_context(box, a(ib), b(jb))
                - event_probability(box, Event.of({a(ia): 0}))
                - event_probability(box, Event.of({b(ja): 0}))
            )
            values.append(CHValue(settings=(ia, ib, ja, jb), value=value))
    return values


def ch_all(box: ProbabilityBox) -> list[CHValue]:
    """CH variants over every setting quadruple of the box."""
    pa, pb = box.scenario.parties
    na, nb = len(box.scenario.inputs[pa]), len(box.scenario.inputs[pb])
    out = []
    for i, i2 in itertools.combinations(range(1, na + 1), 2):
        for j, j2 in itertools.combinations(range(1, nb + 1), 2):
            out.extend(ch_values(box, i, i2, j, j2))
    return out
