"""Exclusive events, the exclusivity graph, and E-principle checks.

Two events are exclusive when some shared input receives different
outputs.  The sum of probabilities of pairwise-exclusive events is at
most 1 for any physical box; violations are returned as certificates a
third party can re-check with `exclusive` and `event_probability` alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import catalog
from .affine import AffineExpr
from .model import (
    BoxError,
    Event,
    ProbabilityBox,
    Scenario,
    event_probability,
    full_context_events,
    mix_boxes,
    uniform_box,
)


def exclusive(e1: Event, e2: Event) -> bool:
    """True iff some input assigned by both events gets different outputs."""
    a = dict(e1.assignment)
    for label, out in e2.assignment:
        if label in a and a[label] != out:
            return True
    return False


@dataclass(frozen=True)
class ExclusivityGraph:
    nodes: tuple[Event, ...]
    edges: frozenset[tuple[int, int]]

    def neighbors(self) -> list[set[int]]:
        adj = [set() for _ in self.nodes]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj


def build_exclusivity_graph(
    scenario: Scenario, events: Iterable[Event] | None = None
) -> ExclusivityGraph:
    """Graph over the event universe; default universe is all full-context events."""
    if events is None:
        nodes = []
        for ctx in scenario.contexts:
            labels = sorted(ctx)
            for outcome in scenario.outcome_tuples(ctx):
                nodes.append(Event.of(dict(zip(labels, outcome))))
    else:
        nodes = list(events)
        for e in nodes:
            scenario.validate_event(e)
    nodes = tuple(nodes)
    edges = frozenset(
        (i, j)
        for i, j in itertools.combinations(range(len(nodes)), 2)
        if exclusive(nodes[i], nodes[j])
    )
    return ExclusivityGraph(nodes=nodes, edges=edges)


def maximal_cliques(graph: ExclusivityGraph) -> list[tuple[Event, ...]]:
    """All maximal cliques, Bron-Kerbosch with pivoting, canonical order."""
    adj = graph.neighbors()
    cliques: list[tuple[int, ...]] = []

    def extend(clique: list[int], candidates: set[int], excluded: set[int]):
        if not candidates and not excluded:
            cliques.append(tuple(sorted(clique)))
            return
        pivot = max(candidates | excluded, key=lambda v: len(adj[v] & candidates))
        for v in sorted(candidates - adj[pivot]):
            extend(clique + [v], candidates & adj[v], excluded & adj[v])
            candidates.remove(v)
            excluded.add(v)

    extend([], set(range(len(graph.nodes))), set())
    result = [tuple(graph.nodes[i] for i in clique) for clique in cliques]
    result.sort()
    return result


@dataclass(frozen=True)
class E1ViolationCertificate:
    events: tuple[Event, ...]
    probabilities: tuple[Fraction, ...]
    total: Fraction

    def verify(self, box: ProbabilityBox) -> bool:
        if len(self.events) != len(self.probabilities):
            return False
        if any(not exclusive(a, b) for a, b in itertools.combinations(self.events, 2)):
            return False
        if any(event_probability(box, e) != p for e, p in zip(self.events, self.probabilities)):
            return False
        return sum(self.probabilities, Fraction(0)) == self.total and self.total > 1


@dataclass(frozen=True)
class E1Report:
    passed: bool
    certificates: tuple[E1ViolationCertificate, ...]


def e1_check(box: ProbabilityBox, events: Iterable[Event] | None = None) -> E1Report:
    """Single-copy exclusivity check over all maximal cliques."""
    graph = build_exclusivity_graph(box.scenario, events)
    certificates = []
    for clique in maximal_cliques(graph):
        probs = tuple(event_probability(box, e) for e in clique)
        total = sum(probs, Fraction(0))
        if total > 1:
            certificates.append(
                E1ViolationCertificate(events=clique, probabilities=probs, total=total)
            )
    return E1Report(passed=not certificates, certificates=tuple(certificates))


def level1_constraints() -> list[AffineExpr]:
    """Symbolic totals of the nontrivial level-1 cliques, "expr <= 1".

    The nontrivial maximal cliques of the single-party graph are the
    three-event ones spanning all three pair contexts (the four-event
    cliques inside one context restate normalization); their totals are
    affine in (m1, m2, m3, c12, c23, c13).
    """
    from .polytope import symbolic_entry

    scenario = catalog.single_party_scenario()
    graph = build_exclusivity_graph(scenario)
    constraints = []
    for clique in maximal_cliques(graph):
        contexts = {e.input_set for e in clique}
        if len(clique) == 3 and len(contexts) == 3:
            total = sum(
                (
                    symbolic_entry(e.input_set, tuple(o for _, o in e.assignment))
                    for e in clique
                ),
                AffineExpr.of(0),
            )
            constraints.append(total)
    return constraints


def _tag(label: str, copy: int) -> str:
    return f"{label}@{copy}"


def product_box(box: ProbabilityBox, k: int) -> ProbabilityBox:
    """The k-fold independent-copies box; only k in {1, 2} is supported."""
    if k not in (1, 2):
        raise ValueError(f"copies k={k} outside supported range {{1, 2}}")
    if k == 1:
        return box
    src = box.scenario
    parties = tuple(_tag(p, c) for c in (1, 2) for p in src.parties)
    inputs = {
        _tag(p, c): tuple(_tag(x, c) for x in src.inputs[p])
        for c in (1, 2)
        for p in src.parties
    }
    outputs = {
        _tag(x, c): card for c in (1, 2) for x, card in src.outputs.items()
    }
    contexts = tuple(
        frozenset(_tag(x, 1) for x in c1) | frozenset(_tag(x, 2) for x in c2)
        for c1 in src.contexts
        for c2 in src.contexts
    )
    scenario = Scenario(parties=parties, inputs=inputs, outputs=outputs, contexts=contexts)

    tables = {}
    for c1 in src.contexts:
        for c2 in src.contexts:
            ctx = frozenset(_tag(x, 1) for x in c1) | frozenset(_tag(x, 2) for x in c2)
            labels = sorted(ctx)
            l1, l2 = sorted(c1), sorted(c2)
            table = {}
            for o1, p1 in box.tables[c1].items():
                for o2, p2 in box.tables[c2].items():
                    value = dict(zip((_tag(x, 1) for x in l1), o1))
                    value.update(zip((_tag(x, 2) for x in l2), o2))
                    outcome = tuple(value[lab] for lab in labels)
                    table[outcome] = p1 * p2
            tables[ctx] = table
    return ProbabilityBox(scenario, tables)


def _min_atom_cover(scenario: Scenario) -> list[dict[str, int]]:
    """A smallest set of global assignments covering every full-context event.

    Events consistent with a common global assignment are pairwise
    non-exclusive, so each cover member yields an independent set of the
    exclusivity graph.  Exact search for small scenarios, greedy otherwise.
    """
    variables = sorted(scenario.all_inputs)
    atoms = list(itertools.product(*(range(scenario.outputs[v]) for v in variables)))
    events = []
    for ctx in scenario.contexts:
        labels = sorted(ctx)
        for outcome in scenario.outcome_tuples(ctx):
            events.append(dict(zip(labels, outcome)))
    index = {v: i for i, v in enumerate(variables)}
    covers = [
        frozenset(
            k
            for k, ev in enumerate(events)
            if all(atom[index[v]] == o for v, o in ev.items())
        )
        for atom in atoms
    ]
    everything = frozenset(range(len(events)))

    chosen: list[int] | None = None
    if len(atoms) <= 16:
        for size in range(1, len(atoms) + 1):
            for combo in itertools.combinations(range(len(atoms)), size):
                union = frozenset().union(*(covers[a] for a in combo))
                if union == everything:
                    chosen = list(combo)
                    break
            if chosen is not None:
                break
    if chosen is None:
        chosen = []
        left = set(everything)
        while left:
            best = max(range(len(atoms)), key=lambda a: (len(covers[a] & left), -a))
            chosen.append(best)
            left -= covers[best]
    return [dict(zip(variables, atoms[a])) for a in chosen]


def _violating_clique(
    weights: Sequence[Fraction], adj: list[set[int]], class_of: Sequence[int]
) -> list[int] | None:
    """Find any pairwise-exclusive index set with weight sum > 1, or None.

    Branch-and-bound over nodes sorted by decreasing weight; `class_of`
    partitions nodes into independent sets, so a clique meets each class
    at most once and the heaviest candidate per class bounds the branch.
    """
    order = sorted(range(len(weights)), key=lambda v: (-weights[v], v))

    def bound(candidates: list[int]) -> Fraction:
        heaviest: dict[int, Fraction] = {}
        for v in candidates:  # weight-sorted, first of each class wins
            heaviest.setdefault(class_of[v], weights[v])
        return sum(heaviest.values(), Fraction(0))

    def search(total: Fraction, candidates: list[int]) -> list[int] | None:
        while candidates:
            if total + bound(candidates) <= 1:
                return None
            v = candidates[0]
            picked = total + weights[v]
            if picked > 1:
                return [v]
            hit = search(picked, [u for u in candidates[1:] if u in adj[v]])
            if hit is not None:
                return [v] + hit
            candidates = candidates[1:]
        return None

    return search(Fraction(0), order)


def lo_k_check(box: ProbabilityBox, k: int) -> E1Report:
    """Exclusivity check on k independent copies (k in {1, 2}).

    k=1 delegates to the single-copy clique enumeration; k=2 searches the
    product-box exclusivity graph for any pairwise-exclusive event set
    with probability sum above 1.
    """
    if k not in (1, 2):
        raise ValueError(f"copies k={k} outside supported range {{1, 2}}")
    if k == 1:
        return e1_check(box)
    # If a global joint over all inputs exists, the product joint exists as
    # well and every pairwise-exclusive set is bounded by 1; skip the search.
    from .marginal import joint_extension_feasibility

    base_joint, _ = joint_extension_feasibility(box, box.scenario.all_inputs)
    if base_joint.feasible:
        return E1Report(passed=True, certificates=())
    prod = product_box(box, 2)
    events = [e for e in full_context_events(prod) if event_probability(prod, e) > 0]
    graph = build_exclusivity_graph(prod.scenario, events)
    weights = [event_probability(prod, e) for e in graph.nodes]

    # Pruning classes: lift a minimum atom cover of the single-copy
    # scenario to assignment pairs over both copies.
    base_cover = _min_atom_cover(box.scenario)
    lifted = []
    for a1 in base_cover:
        for a2 in base_cover:
            atom = {_tag(x, 1): o for x, o in a1.items()}
            atom.update({_tag(x, 2): o for x, o in a2.items()})
            lifted.append(atom)
    class_of = []
    for e in graph.nodes:
        wanted = dict(e.assignment)
        cls = next(
            k
            for k, atom in enumerate(lifted)
            if all(atom[v] == o for v, o in wanted.items())
        )
        class_of.append(cls)

    hit = _violating_clique(weights, graph.neighbors(), class_of)
    if hit is None:
        return E1Report(passed=True, certificates=())
    clique = tuple(sorted(graph.nodes[i] for i in hit))
    probs = tuple(event_probability(prod, e) for e in clique)
    cert = E1ViolationCertificate(events=clique, probabilities=probs, total=sum(probs))
    return E1Report(passed=False, certificates=(cert,))


def noise_threshold(vertex_box: ProbabilityBox) -> Fraction:
    """Critical p for p*I + (1-p)*W: mixtures violate level-1 iff p exceeds it."""
    indet = catalog.indeterministic_boxes()
    if vertex_box not in indet.values():
        raise BoxError("noise threshold is defined for the indeterministic vertices only")
    w = catalog.uniform_pair_box()
    graph = build_exclusivity_graph(vertex_box.scenario)
    thresholds = []
    for clique in maximal_cliques(graph):
        t1 = sum((event_probability(vertex_box, e) for e in clique), Fraction(0))
        t0 = sum((event_probability(w, e) for e in clique), Fraction(0))
        if t1 > 1:
            thresholds.append((1 - t0) / (t1 - t0))
    if not thresholds:
        raise BoxError("vertex violates no level-1 constraint")
    return min(thresholds)


def noisy_vertex(vertex_box: ProbabilityBox, p: Fraction) -> ProbabilityBox:
    """The mixture p * vertex + (1 - p) * W."""
    p = Fraction(p)
    return mix_boxes([(p, vertex_box), (1 - p, uniform_box(vertex_box.scenario))])
