"""The no-disturbance polytope for the three-input two-output scenario.

The polytope lives in the six parameters (m1, m2, m3, c12, c23, c13),
where m_i is the probability of output 0 on input x_i and c_ij the
probability of outputs (0,0) on the pair context x_i x_j.  Positivity of
the twelve table entries gives the twelve facets; the twelve vertices
(eight deterministic, four indeterministic) are recovered by exhaustive
basis enumeration, which is certifiably complete at this size.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import catalog
from .affine import AffineExpr
from .lp import LPFeasible, solve_equality_feasibility, solve_square
from .model import (
    BoxError,
    Event,
    ProbabilityBox,
    context_key,
    event_probability,
)

PARAMS = ("m1", "m2", "m3", "c12", "c23", "c13")

_PAIRS = ((1, 2), (2, 3), (1, 3))


def _facets() -> list[tuple[str, AffineExpr]]:
    facets = []
    for i, j in _PAIRS:
        mi, mj, cij = f"m{i}", f"m{j}", f"c{i}{j}"
        facets.append((f"{cij} >= 0", AffineExpr.of(**{cij: 1})))
        facets.append((f"{mi} - {cij} >= 0", AffineExpr.of(**{mi: 1, cij: -1})))
        facets.append((f"{mj} - {cij} >= 0", AffineExpr.of(**{mj: 1, cij: -1})))
        facets.append(
            (f"1 - {mi} - {mj} + {cij} >= 0", AffineExpr.of(1, **{mi: -1, mj: -1, cij: 1}))
        )
    return facets


FACETS = _facets()


@dataclass(frozen=True)
class NDParameterization:
    m1: Fraction
    m2: Fraction
    m3: Fraction
    c12: Fraction
    c23: Fraction
    c13: Fraction

    def __post_init__(self):
        for name in PARAMS:
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @property
    def vector(self) -> tuple[Fraction, ...]:
        return tuple(getattr(self, name) for name in PARAMS)

    @classmethod
    def from_vector(cls, vec) -> "NDParameterization":
        return cls(**dict(zip(PARAMS, vec)))

    def facet_values(self) -> list[Fraction]:
        env = dict(zip(PARAMS, self.vector))
        return [expr.value(env) for _, expr in FACETS]

    def violated_facets(self) -> list[tuple[str, Fraction]]:
        return [
            (FACETS[k][0], v) for k, v in enumerate(self.facet_values()) if v < 0
        ]


@dataclass(frozen=True)
class Vertex:
    name: str
    params: NDParameterization
    deterministic: bool
    saturated_facets: tuple[int, ...]

    def box(self) -> ProbabilityBox:
        return from_parameterization(self.params)


@dataclass(frozen=True)
class NDViolation:
    input: str
    output: int
    context_a: str
    context_b: str
    value_a: Fraction
    value_b: Fraction


@dataclass(frozen=True)
class NDReport:
    passed: bool
    violations: tuple[NDViolation, ...]


def check_no_disturbance(box: ProbabilityBox) -> NDReport:
    """Pass iff every single-input marginal agrees across all its contexts."""
    violations = []
    for label in box.scenario.all_inputs:
        ctxs = box.scenario.contexts_containing(frozenset({label}))
        for output in range(box.scenario.outputs[label]):
            values = []
            for ctx in ctxs:
                labels = sorted(ctx)
                pos = labels.index(label)
                values.append(
                    (ctx, sum(p for o, p in box.tables[ctx].items() if o[pos] == output))
                )
            ref_ctx, ref = values[0]
            for ctx, val in values[1:]:
                if val != ref:
                    violations.append(
                        NDViolation(
                            input=label,
                            output=output,
                            context_a=context_key(ref_ctx),
                            context_b=context_key(ctx),
                            value_a=ref,
                            value_b=val,
                        )
                    )
    return NDReport(passed=not violations, violations=tuple(violations))


def _require_pair_scenario(box: ProbabilityBox) -> None:
    if box.scenario != catalog.single_party_scenario():
        raise BoxError("operation requires the single-party three-input scenario")


def to_parameterization(box: ProbabilityBox) -> NDParameterization:
    """Read (m1, m2, m3, c12, c23, c13) off a single-party ND box."""
    _require_pair_scenario(box)
    report = check_no_disturbance(box)
    if not report.passed:
        raise BoxError(f"box violates no-disturbance: {report.violations[0]}")
    values = {}
    for i in (1, 2, 3):
        values[f"m{i}"] = event_probability(box, Event.of({f"x{i}": 0}))
    for i, j in _PAIRS:
        values[f"c{i}{j}"] = event_probability(box, Event.of({f"x{i}": 0, f"x{j}": 0}))
    return NDParameterization(**values)


def from_parameterization(params: NDParameterization) -> ProbabilityBox:
    """Rebuild the box tables from the six parameters (inverse of the above)."""
    scenario = catalog.single_party_scenario()
    env = dict(zip(PARAMS, params.vector))
    tables = {}
    for i, j in _PAIRS:
        ctx = frozenset({f"x{i}", f"x{j}"})
        mi, mj, cij = env[f"m{i}"], env[f"m{j}"], env[f"c{i}{j}"]
        # Sorted labels are (x_i, x_j) with i < j, matching Table-ordering.
        tables[ctx] = {
            (0, 0): cij,
            (0, 1): mi - cij,
            (1, 0): mj - cij,
            (1, 1): 1 - mi - mj + cij,
        }
    return ProbabilityBox(scenario, tables)


def symbolic_entry(ctx: frozenset[str], outcome: tuple[int, int]) -> AffineExpr:
    """A pair-context table entry as an affine form in the six parameters."""
    labels = sorted(ctx)
    i, j = (int(lab[1]) for lab in labels)
    mi, mj, cij = f"m{i}", f"m{j}", f"c{i}{j}"
    if outcome == (0, 0):
        return AffineExpr.sym(cij)
    if outcome == (0, 1):
        return AffineExpr.of(**{mi: 1, cij: -1})
    if outcome == (1, 0):
        return AffineExpr.of(**{mj: 1, cij: -1})
    return AffineExpr.of(1, **{mi: -1, mj: -1, cij: 1})


def _saturated(params: NDParameterization) -> tuple[int, ...]:
    return tuple(k for k, v in enumerate(params.facet_values()) if v == 0)


def enumerate_vertices() -> list[Vertex]:
    """All vertices of the polytope by exhaustive facet-basis enumeration.

    Every 6-subset of facets is solved as an equality system; singular
    systems are skipped, infeasible solutions discarded, duplicates
    collapsed by exact equality.  Completeness follows because every
    vertex is a basic feasible solution of the facet system.
    """
    found: dict[tuple[Fraction, ...], NDParameterization] = {}
    rows = [[expr.coeff_map.get(p, Fraction(0)) for p in PARAMS] for _, expr in FACETS]
    consts = [expr.const for _, expr in FACETS]
    for combo in itertools.combinations(range(len(FACETS)), 6):
        matrix = [rows[k] for k in combo]
        rhs = [-consts[k] for k in combo]
        solution = solve_square(matrix, rhs)
        if solution is None:
            continue
        params = NDParameterization.from_vector(solution)
        if any(v < 0 for v in params.facet_values()):
            continue
        found.setdefault(params.vector, params)

    named = {
        name: to_parameterization(box).vector
        for name, box in catalog.extremal_boxes().items()
    }
    by_vector = {vec: name for name, vec in named.items()}

    vertices = []
    for vec, params in found.items():
        name = by_vector.get(vec, "")
        deterministic = all(v.denominator == 1 for v in vec)
        vertices.append(
            Vertex(
                name=name or f"V({','.join(str(v) for v in vec)})",
                params=params,
                deterministic=deterministic,
                saturated_facets=_saturated(params),
            )
        )

    order = {f"D{i}": i for i in range(1, 9)}
    order.update({f"I{j}": 8 + j for j in range(1, 5)})
    vertices.sort(key=lambda v: (order.get(v.name, 99), v.params.vector))
    return vertices


@dataclass(frozen=True)
class MembershipResult:
    weights: dict[str, Fraction] | None
    violated_facet: str | None = None
    facet_value: Fraction | None = None

    @property
    def member(self) -> bool:
        return self.weights is not None


def decompose_membership(box: ProbabilityBox) -> MembershipResult:
    """Certify membership by exact convex weights over the twelve vertices."""
    params = to_parameterization(box)
    violated = params.violated_facets()
    if violated:
        name, value = violated[0]
        return MembershipResult(weights=None, violated_facet=name, facet_value=value)

    vertices = enumerate_vertices()
    # Equality system: sum w_v * vertex_v = params, sum w_v = 1, w >= 0.
    matrix = [[v.params.vector[i] for v in vertices] for i in range(len(PARAMS))]
    rhs = list(params.vector)
    matrix.append([Fraction(1)] * len(vertices))
    rhs.append(Fraction(1))
    result = solve_equality_feasibility(matrix, rhs)
    if not isinstance(result, LPFeasible):
        raise RuntimeError("facet-feasible box failed vertex decomposition")
    weights = {
        vertices[k].name: w for k, w in enumerate(result.x) if w != 0
    }
    return MembershipResult(weights=weights)
