"""Scenario / event / probability-box data model with exact rational entries.

Everything downstream consumes these types.  All probabilities are
`fractions.Fraction`; no floating point enters the core at any point.
Objects are immutable after construction and all operations are pure,
so they are safe to share across threads.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class BoxError(ValueError):
    """Base class for malformed scenarios, events or boxes."""


class ScenarioError(BoxError):
    pass


class EventError(BoxError):
    pass


class BoxFormatError(BoxError):
    """Raised on malformed serialized boxes."""


_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse a "p/q" or integer string.  Decimals are rejected."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise BoxFormatError(f"malformed rational {text!r} (expected 'p/q' or integer)")
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def context_key(inputs: Iterable[str]) -> str:
    return ",".join(sorted(inputs))


@dataclass(frozen=True)
class Scenario:
    """A black-box measurement scenario.

    `contexts` are the declared jointly-measurable input sets; they are
    explicit data, never inferred, because downstream analyses depend on
    which same-side contexts exist.  Subset marginals are derivable from
    a declared context and are not stored.
    """

    parties: tuple[str, ...]
    inputs: Mapping[str, tuple[str, ...]]
    outputs: Mapping[str, int]
    contexts: tuple[frozenset[str], ...]

    def __post_init__(self):
        object.__setattr__(self, "parties", tuple(self.parties))
        object.__setattr__(
            self, "inputs", {p: tuple(labels) for p, labels in self.inputs.items()}
        )
        object.__setattr__(self, "outputs", dict(self.outputs))
        ctxs = sorted({frozenset(c) for c in self.contexts}, key=lambda c: tuple(sorted(c)))
        object.__setattr__(self, "contexts", tuple(ctxs))

        if set(self.inputs) != set(self.parties):
            raise ScenarioError("inputs must be declared for exactly the listed parties")
        labels = self.all_inputs
        if len(labels) != sum(len(v) for v in self.inputs.values()):
            raise ScenarioError("input labels must be globally unique")
        if set(self.outputs) != set(labels):
            raise ScenarioError("output cardinality must be declared per input")
        for label, card in self.outputs.items():
            if card < 2:
                raise ScenarioError(f"input {label!r} needs at least 2 outputs")
        covered = set()
        for ctx in self.contexts:
            if not ctx:
                raise ScenarioError("empty context")
            unknown = ctx - set(labels)
            if unknown:
                raise ScenarioError(f"context references undeclared inputs {sorted(unknown)}")
            covered |= ctx
        if covered != set(labels):
            missing = sorted(set(labels) - covered)
            raise ScenarioError(f"inputs {missing} appear in no context")

    @property
    def all_inputs(self) -> tuple[str, ...]:
        seen = []
        for p in self.parties:
            seen.extend(self.inputs[p])
        return tuple(seen)

    def contexts_containing(self, inputs: frozenset[str]) -> list[frozenset[str]]:
        """Declared contexts covering `inputs`, smallest first, canonical order."""
        hits = [c for c in self.contexts if inputs <= c]
        return sorted(hits, key=lambda c: (len(c), tuple(sorted(c))))

    def outcome_tuples(self, ctx: frozenset[str]) -> list[tuple[int, ...]]:
        labels = sorted(ctx)
        ranges = [range(self.outputs[lab]) for lab in labels]
        return list(itertools.product(*ranges))

    def validate_event(self, event: "Event") -> None:
        labels = set(self.all_inputs)
        for lab, out in event.assignment:
            if lab not in labels:
                raise EventError(f"event references undeclared input {lab!r}")
            if not 0 <= out < self.outputs[lab]:
                raise EventError(f"output {out} out of range for input {lab!r}")
        if not self.contexts_containing(event.input_set):
            raise EventError(
                f"event inputs {sorted(event.input_set)} lie in no declared context"
            )


@dataclass(frozen=True, order=True)
class Event:
    """An outcome assignment to a nonempty set of compatible inputs."""

    assignment: tuple[tuple[str, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted(self.assignment))
        if not pairs:
            raise EventError("event must assign at least one input")
        if len({lab for lab, _ in pairs}) != len(pairs):
            raise EventError("event assigns an input twice")
        object.__setattr__(self, "assignment", pairs)

    @classmethod
    def of(cls, mapping: Mapping[str, int]) -> "Event":
        return cls(tuple(mapping.items()))

    @property
    def input_set(self) -> frozenset[str]:
        return frozenset(lab for lab, _ in self.assignment)

    def output(self, label: str) -> int:
        for lab, out in self.assignment:
            if lab == label:
                return out
        raise KeyError(label)

    def __str__(self):
        outs = "".join(str(o) for _, o in self.assignment)
        ins = " ".join(lab for lab, _ in self.assignment)
        return f"({outs}|{ins})"


@dataclass(frozen=True)
class ProbabilityBox:
    """Per-context outcome distributions with exact rational entries."""

    scenario: Scenario
    tables: Mapping[frozenset[str], Mapping[tuple[int, ...], Fraction]]

    def __post_init__(self):
        tables = {frozenset(c): dict(t) for c, t in self.tables.items()}
        object.__setattr__(self, "tables", tables)
        declared = set(self.scenario.contexts)
        if set(tables) != declared:
            raise BoxError("box must carry one table per declared context")
        for ctx, table in tables.items():
            expected = set(self.scenario.outcome_tuples(ctx))
            if set(table) != expected:
                raise BoxError(f"context {context_key(ctx)}: incomplete outcome table")
            total = Fraction(0)
            for outcome, p in table.items():
                p = Fraction(p)
                table[outcome] = p
                if p < 0:
                    raise BoxError(
                        f"context {context_key(ctx)}: negative entry {p} at {outcome}"
                    )
                total += p
            if total != 1:
                raise BoxError(f"context {context_key(ctx)}: entries sum to {total}, not 1")

    def entry(self, ctx: frozenset[str], outcome: tuple[int, ...]) -> Fraction:
        return self.tables[frozenset(ctx)][outcome]


def event_probability(box: ProbabilityBox, event: Event) -> Fraction:
    """Marginal probability of `event` from its smallest containing context.

    When several contexts contain the event's inputs the first in canonical
    order is used; agreement between them is what the no-disturbance check
    enforces upstream.
    """
    box.scenario.validate_event(event)
    ctx = box.scenario.contexts_containing(event.input_set)[0]
    labels = sorted(ctx)
    wanted = dict(event.assignment)
    total = Fraction(0)
    for outcome, p in box.tables[ctx].items():
        if all(outcome[i] == wanted[lab] for i, lab in enumerate(labels) if lab in wanted):
            total += p
    return total


def full_context_events(box: ProbabilityBox) -> list[Event]:
    """All full-context events in canonical (context, outcome) order."""
    events = []
    for ctx in box.scenario.contexts:
        labels = sorted(ctx)
        for outcome in box.scenario.outcome_tuples(ctx):
            events.append(Event.of(dict(zip(labels, outcome))))
    return events


def mix_boxes(parts: Sequence[tuple[Fraction, ProbabilityBox]]) -> ProbabilityBox:
    """Convex mixture of boxes over a common scenario."""
    if not parts:
        raise BoxError("empty mixture")
    scenario = parts[0][1].scenario
    if any(b.scenario != scenario for _, b in parts):
        raise BoxError("mixture components live on different scenarios")
    if sum(Fraction(w) for w, _ in parts) != 1:
        raise BoxError("mixture weights must sum to 1")
    tables = {}
    for ctx in scenario.contexts:
        tables[ctx] = {
            outcome: sum((Fraction(w) * b.tables[ctx][outcome] for w, b in parts), Fraction(0))
            for outcome in scenario.outcome_tuples(ctx)
        }
    return ProbabilityBox(scenario, tables)


def uniform_box(scenario: Scenario) -> ProbabilityBox:
    tables = {}
    for ctx in scenario.contexts:
        outcomes = scenario.outcome_tuples(ctx)
        p = Fraction(1, len(outcomes))
        tables[ctx] = {o: p for o in outcomes}
    return ProbabilityBox(scenario, tables)


# ---------------------------------------------------------------------------
# Serialization.  Text format: a JSON object with `parties`, `inputs`,
# `outputs`, `contexts` and `tables`; rationals are "p/q" strings, never
# decimals.  Round-trips are bit-exact.
# ---------------------------------------------------------------------------

def box_to_dict(box: ProbabilityBox) -> dict:
    sc = box.scenario
    return {
        "parties": list(sc.parties),
        "inputs": {p: list(v) for p, v in sc.inputs.items()},
        "outputs": dict(sc.outputs),
        "contexts": [sorted(c) for c in sc.contexts],
        "tables": {
            context_key(ctx): {
                "".join(str(o) for o in outcome): format_rational(p)
                for outcome, p in sorted(box.tables[ctx].items())
            }
            for ctx in sc.contexts
        },
    }


def serialize_box(box: ProbabilityBox) -> str:
    return json.dumps(box_to_dict(box), indent=2, sort_keys=True) + "\n"


def box_from_dict(data: dict) -> ProbabilityBox:
    try:
        scenario = Scenario(
            parties=tuple(data["parties"]),
            inputs={p: tuple(v) for p, v in data["inputs"].items()},
            outputs={k: int(v) for k, v in data["outputs"].items()},
            contexts=tuple(frozenset(c) for c in data["contexts"]),
        )
    except KeyError as exc:
        raise BoxFormatError(f"missing field {exc}") from exc
    tables = {}
    raw_tables = data.get("tables", {})
    for ctx in scenario.contexts:
        key = context_key(ctx)
        if key not in raw_tables:
            raise BoxFormatError(f"missing table for context {key}")
        labels = sorted(ctx)
        table = {}
        for out_str, val in raw_tables[key].items():
            if len(out_str) != len(labels):
                raise BoxFormatError(f"context {key}: bad outcome string {out_str!r}")
            outcome = tuple(int(ch) for ch in out_str)
            table[outcome] = parse_rational(str(val))
        tables[ctx] = table
    unknown = set(raw_tables) - {context_key(c) for c in scenario.contexts}
    if unknown:
        raise BoxFormatError(f"tables for undeclared contexts: {sorted(unknown)}")
    return ProbabilityBox(scenario, tables)


def parse_box(text: str) -> ProbabilityBox:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BoxFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise BoxFormatError("top level must be an object")
    return box_from_dict(data)
