"""The Garg-Mermin correlation family and its unphysicality certificate.

GM(c), 0 < c <= 1/3, is a bipartite box over three inputs per side whose
nine cross-context distributions satisfy no-signaling and every CH
inequality, yet which admits no global joint distribution.  The
certificate assembled here chains three independently verifiable pieces:

1. exclusivity applied to four pairwise-exclusive event triples pins the
   same-side pair distributions to the unique point
   alpha = beta = gamma = (1-3c)/6;
2. at that point the closed-form tri-joint conditions are all satisfied,
   so tri-joint extensions exist on both sides;
3. an exact-LP Farkas vector witnesses that no global joint over all six
   inputs reproduces GM(c).

A third party can re-check every piece with `exclusive`, plain rational
arithmetic and `verify_certificate`, without re-running the pipeline.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .affine import AffineExpr
from .exclusivity import exclusive
from .marginal import (
    ExtensionProblem,
    FeasibilityResult,
    FineReport,
    fine_tri_joint_conditions,
    joint_extension_feasibility,
    verify_certificate,
)
from .model import BoxError, Event, ProbabilityBox, Scenario, event_probability

A_INPUTS = ("A.x1", "A.x2", "A.x3")
B_INPUTS = ("B.x1", "B.x2", "B.x3")

# Same-side pair context -> name of its free diagonal parameter.
_SIDE_PARAM = {
    frozenset({"x1", "x2"}): "alpha",
    frozenset({"x2", "x3"}): "beta",
    frozenset({"x1", "x3"}): "gamma",
}


def _check_c(c: Fraction) -> Fraction:
    c = Fraction(c)
    if not 0 < c <= Fraction(1, 3):
        raise BoxError(f"c={c} outside the GM range (0, 1/3]")
    return c


def gm_scenario(side_contexts: str | None = None) -> Scenario:
    """The bipartite GM scenario: nine cross contexts, plus optionally the
    three same-side pair contexts of one party ("A" or "B")."""
    contexts = [frozenset({a, b}) for a in A_INPUTS for b in B_INPUTS]
    if side_contexts is not None:
        if side_contexts not in ("A", "B"):
            raise BoxError("side must be 'A' or 'B'")
        labels = A_INPUTS if side_contexts == "A" else B_INPUTS
        contexts.extend(frozenset(pair) for pair in itertools.combinations(labels, 2))
    return Scenario(
        parties=("A", "B"),
        inputs={"A": A_INPUTS, "B": B_INPUTS},
        outputs={lab: 2 for lab in A_INPUTS + B_INPUTS},
        contexts=tuple(contexts),
    )


def gm_box(c: Fraction) -> ProbabilityBox:
    """GM(c): diagonal contexts x1x1 and x2x2 are perfectly anticorrelated
    up to c; the seven remaining cross contexts share one distribution."""
    c = _check_c(c)
    scenario = gm_scenario()
    diagonal = {(0, 0): (1 - c) / 2, (0, 1): Fraction(0), (1, 0): Fraction(0), (1, 1): (1 + c) / 2}
    rest = {
        (0, 0): (1 - 3 * c) / 6,
        (0, 1): Fraction(1, 3),
        (1, 0): Fraction(1, 3),
        (1, 1): (1 + 3 * c) / 6,
    }
    tables = {}
    for i, a in enumerate(A_INPUTS, start=1):
        for j, b in enumerate(B_INPUTS, start=1):
            ctx = frozenset({a, b})
            tables[ctx] = dict(diagonal if (i == j and i in (1, 2)) else rest)
    return ProbabilityBox(scenario, tables)


def side_extension_box(
    alpha: Fraction, beta: Fraction, gamma: Fraction, c: Fraction
) -> ProbabilityBox:
    """Single-party pair-family box with GM-compatible equal marginals."""
    from . import catalog  # local import to avoid a cycle at module load

    c = _check_c(c)
    scenario = catalog.single_party_scenario()
    params = {
        frozenset({"x1", "x2"}): Fraction(alpha),
        frozenset({"x2", "x3"}): Fraction(beta),
        frozenset({"x1", "x3"}): Fraction(gamma),
    }
    tables = {}
    for ctx, s in params.items():
        off = (1 - c) / 2 - s
        tables[ctx] = {(0, 0): s, (0, 1): off, (1, 0): off, (1, 1): c + s}
    return ProbabilityBox(scenario, tables)


def _side_symbol(ctx: frozenset[str]) -> str:
    bare = frozenset(lab.split(".", 1)[1] for lab in ctx)
    return _SIDE_PARAM[bare]


def event_expression(box: ProbabilityBox, event: Event, side: str = "A") -> AffineExpr:
    """Probability of `event` as an affine expression: cross-context events
    are constants from GM(c); same-side pair events carry the free
    parameter of their context per the equal-marginal pair family."""
    labels = sorted(event.input_set)
    parties = {lab.split(".", 1)[0] for lab in labels}
    if len(parties) == 2:
        return AffineExpr.of(event_probability(box, event))
    if parties != {side}:
        raise BoxError(f"event {event} lives on neither the cross nor the {side} side")
    ctx = frozenset(labels)
    sym = _side_symbol(ctx)
    c = _gm_c(box)
    outs = tuple(event.output(lab) for lab in labels)
    if outs == (0, 0):
        return AffineExpr.sym(sym)
    if outs == (1, 1):
        return AffineExpr.of(c, **{sym: 1})
    return AffineExpr.of((1 - c) / 2, **{sym: -1})


def _gm_c(box: ProbabilityBox) -> Fraction:
    ctx = frozenset({"A.x1", "B.x1"})
    return 1 - 2 * box.tables[ctx][(0, 0)]


def _ev(pairs: dict[str, int]) -> Event:
    return Event.of(pairs)


def exclusive_sets(c: Fraction) -> list["ExclusiveSet"]:
    """The four pairwise-exclusive event triples driving the argument."""
    c = _check_c(c)
    box = gm_box(c)
    triples = {
        "S1": (
            _ev({"A.x1": 1, "B.x1": 1}),
            _ev({"A.x2": 1, "B.x1": 0}),
            _ev({"A.x1": 0, "A.x2": 0}),
        ),
        "S2": (
            _ev({"A.x2": 1, "B.x2": 1}),
            _ev({"A.x3": 1, "B.x2": 0}),
            _ev({"A.x2": 0, "A.x3": 0}),
        ),
        "S3": (
            _ev({"A.x1": 1, "B.x1": 1}),
            _ev({"A.x3": 1, "B.x1": 0}),
            _ev({"A.x1": 0, "A.x3": 0}),
        ),
        "S4": (
            _ev({"A.x1": 0, "A.x2": 1}),
            _ev({"A.x2": 0, "A.x3": 1}),
            _ev({"A.x1": 1, "A.x3": 0}),
        ),
    }
    sets = []
    for name, events in triples.items():
        for e1, e2 in itertools.combinations(events, 2):
            if not exclusive(e1, e2):
                raise RuntimeError(f"{name}: events {e1}, {e2} are not exclusive")
        total = sum((event_expression(box, e) for e in events), AffineExpr.of(0))
        sets.append(ExclusiveSet(name=name, events=events, total=total))
    return sets


@dataclass(frozen=True)
class ExclusiveSet:
    name: str
    events: tuple[Event, Event, Event]
    total: AffineExpr


@dataclass(frozen=True)
class ParameterBound:
    symbol: str
    bound: Fraction
    witness: ExclusiveSet


@dataclass(frozen=True)
class GMBounds:
    uppers: tuple[ParameterBound, ...]  # alpha, beta, gamma <= (1-3c)/6
    lower: ParameterBound  # alpha + beta + gamma >= (1-3c)/2


def derive_bounds(c: Fraction) -> GMBounds:
    """Apply the exclusivity bound 'total <= 1' to the four event sets."""
    sets = {s.name: s for s in exclusive_sets(c)}
    uppers = []
    for name, symbol in (("S1", "alpha"), ("S2", "beta"), ("S3", "gamma")):
        witness = sets[name]
        coeffs = witness.total.coeff_map
        if coeffs != {symbol: Fraction(1)}:
            raise RuntimeError(f"{name}: unexpected symbolic total {witness.total}")
        uppers.append(ParameterBound(symbol=symbol, bound=1 - witness.total.const, witness=witness))
    s4 = sets["S4"]
    if s4.total.coeff_map != {s: Fraction(-1) for s in ("alpha", "beta", "gamma")}:
        raise RuntimeError(f"S4: unexpected symbolic total {s4.total}")
    lower = ParameterBound(symbol="alpha+beta+gamma", bound=s4.total.const - 1, witness=s4)
    return GMBounds(uppers=tuple(uppers), lower=lower)


@dataclass(frozen=True)
class UnphysicalityCertificate:
    c: Fraction
    upper_bounds: tuple[ParameterBound, ...]
    lower_bound: ParameterBound
    forced_point: tuple[Fraction, Fraction, Fraction]
    fine_check: FineReport
    lhv_problem: ExtensionProblem
    lhv_witness: FeasibilityResult


def certify_unphysicality(c: Fraction) -> UnphysicalityCertificate:
    """Assemble and verify the full contradiction chain for GM(c)."""
    c = _check_c(c)
    bounds = derive_bounds(c)
    forced = tuple(b.bound for b in bounds.uppers)
    if sum(forced, Fraction(0)) != bounds.lower.bound:
        raise RuntimeError("exclusivity bounds do not pin a unique point")
    fine = fine_tri_joint_conditions(*forced, c)
    if not fine.all_satisfied:
        raise RuntimeError("closed-form conditions rejected the forced point")
    box = gm_box(c)
    result, problem = joint_extension_feasibility(box, A_INPUTS + B_INPUTS)
    if result.feasible:
        raise RuntimeError(f"GM({c}) unexpectedly admits a global joint")
    cert = UnphysicalityCertificate(
        c=c,
        upper_bounds=bounds.uppers,
        lower_bound=bounds.lower,
        forced_point=forced,
        fine_check=fine,
        lhv_problem=problem,
        lhv_witness=result,
    )
    if not verify_unphysicality(cert):
        raise RuntimeError("assembled certificate failed independent verification")
    return cert


def verify_unphysicality(cert: UnphysicalityCertificate) -> bool:
    """Audit a certificate using only primitive checks, never the pipeline."""
    c = Fraction(cert.c)
    if not 0 < c <= Fraction(1, 3):
        return False
    box = gm_box(c)

    def audit_set(es: ExclusiveSet) -> bool:
        if any(not exclusive(a, b) for a, b in itertools.combinations(es.events, 2)):
            return False
        total = sum((event_expression(box, e) for e in es.events), AffineExpr.of(0))
        return total == es.total

    expected = {"alpha", "beta", "gamma"}
    if {b.symbol for b in cert.upper_bounds} != expected:
        return False
    for b in cert.upper_bounds:
        if not audit_set(b.witness):
            return False
        if b.witness.total.coeff_map != {b.symbol: Fraction(1)}:
            return False
        if b.bound != 1 - b.witness.total.const:
            return False
    low = cert.lower_bound
    if not audit_set(low.witness):
        return False
    if low.witness.total.coeff_map != {s: Fraction(-1) for s in expected}:
        return False
    if low.bound != low.witness.total.const - 1:
        return False

    # The bounds pin the forced point uniquely: each coordinate sits at its
    # upper bound and the uppers sum exactly to the lower bound.
    by_symbol = {b.symbol: b.bound for b in cert.upper_bounds}
    point = dict(zip(("alpha", "beta", "gamma"), cert.forced_point))
    if any(point[s] != by_symbol[s] for s in expected):
        return False
    if sum(cert.forced_point, Fraction(0)) != low.bound:
        return False

    fine = fine_tri_joint_conditions(*cert.forced_point, c)
    if fine != cert.fine_check or not fine.all_satisfied:
        return False

    if cert.lhv_witness.feasible:
        return False
    # Rebuild the LHV system from GM(c) itself so a doctored problem
    # statement cannot slip through, then audit the Farkas vector.
    rebuilt = ExtensionProblem.build(box, A_INPUTS + B_INPUTS)
    if rebuilt != cert.lhv_problem:
        return False
    return verify_certificate(cert.lhv_witness, rebuilt)
