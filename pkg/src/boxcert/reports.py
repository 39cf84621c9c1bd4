"""Structured reports shared by the CLI and the HTTP service.

Each `run_*` function returns (report, exit_code): 0 when the property
holds or the command succeeded, 2 when a property is violated (with at
least one verifier-checked certificate in the report).  Usage and input
errors are raised as exceptions and mapped to exit code 1 / HTTP 4xx by
the front ends.  Reports are byte-identical across runs except for the
timing field; all rationals are "p/q" strings.
"""

from __future__ import annotations

import time
from fractions import Fraction

from . import catalog, exclusivity, gm, marginal, polytope
from .model import (
    BoxError,
    Event,
    ProbabilityBox,
    box_to_dict,
    format_rational,
    parse_rational,
)

PASS, VIOLATION = 0, 2


def _event_dict(event: Event) -> dict:
    return {"assignment": dict(event.assignment), "display": str(event)}


def _report(command: str, inputs: dict, verdict: str, started: float, **extra) -> dict:
    report = {
        "command": command,
        "inputs": inputs,
        "verdict": verdict,
        "certificates": extra.pop("certificates", []),
    }
    report.update(extra)
    report["timing_ms"] = round((time.perf_counter() - started) * 1000, 3)
    return report


def _e1_certificates(certs) -> list[dict]:
    return [
        {
            "events": [_event_dict(e) for e in c.events],
            "probabilities": [format_rational(p) for p in c.probabilities],
            "total": format_rational(c.total),
        }
        for c in certs
    ]


def run_check_nd(box: ProbabilityBox) -> tuple[dict, int]:
    started = time.perf_counter()
    result = polytope.check_no_disturbance(box)
    certificates = [
        {
            "input": v.input,
            "output": v.output,
            "contexts": [v.context_a, v.context_b],
            "values": [format_rational(v.value_a), format_rational(v.value_b)],
        }
        for v in result.violations
    ]
    verdict = "pass" if result.passed else "fail"
    return (
        _report("check-nd", {}, verdict, started, certificates=certificates),
        PASS if result.passed else VIOLATION,
    )


def run_check_e1(box: ProbabilityBox) -> tuple[dict, int]:
    started = time.perf_counter()
    result = exclusivity.e1_check(box)
    verdict = "pass" if result.passed else "fail"
    return (
        _report(
            "check-e1", {}, verdict, started,
            certificates=_e1_certificates(result.certificates),
        ),
        PASS if result.passed else VIOLATION,
    )


def run_check_lo(box: ProbabilityBox, copies: int) -> tuple[dict, int]:
    started = time.perf_counter()
    result = exclusivity.lo_k_check(box, copies)
    verdict = "pass" if result.passed else "fail"
    return (
        _report(
            "check-lo", {"copies": copies}, verdict, started,
            certificates=_e1_certificates(result.certificates),
        ),
        PASS if result.passed else VIOLATION,
    )


def run_vertices() -> tuple[dict, int]:
    started = time.perf_counter()
    vertices = polytope.enumerate_vertices()
    records = [
        {
            "name": v.name,
            "deterministic": v.deterministic,
            "params": {
                name: format_rational(value)
                for name, value in zip(polytope.PARAMS, v.params.vector)
            },
            "saturated_facets": list(v.saturated_facets),
            "box": box_to_dict(v.box()),
        }
        for v in vertices
    ]
    return _report("vertices", {}, "ok", started, vertices=records), PASS


_VAR_CHOICES = ("all", "sideA", "sideB")


def _variable_set(box: ProbabilityBox, choice: str) -> tuple[str, ...]:
    if choice == "all":
        return tuple(box.scenario.all_inputs)
    if choice in ("sideA", "sideB"):
        wanted = choice[-1]
        for party in box.scenario.parties:
            if party == wanted:
                return box.scenario.inputs[party]
        raise BoxError(f"box has no party {wanted!r}")
    raise BoxError(f"unknown variable set {choice!r} (expected one of {_VAR_CHOICES})")


def run_extend(box: ProbabilityBox, variables: str) -> tuple[dict, int]:
    started = time.perf_counter()
    result, problem = marginal.joint_extension_feasibility(
        box, _variable_set(box, variables)
    )
    if result.feasible:
        joint = {
            "".join(str(o) for o in atom): format_rational(p)
            for atom, p in result.joint_as_dict(problem).items()
        }
        witness = {
            "kind": "joint",
            "variables": list(problem.variables),
            "joint": joint,
        }
        verdict = "feasible"
    else:
        witness = {
            "kind": "farkas",
            "constraints": [_event_dict(e) for e in problem.events],
            "farkas": [format_rational(y) for y in result.farkas],
        }
        verdict = "infeasible"
    return (
        _report("extend", {"vars": variables}, verdict, started, certificates=[witness]),
        PASS if result.feasible else VIOLATION,
    )


def run_ch(box: ProbabilityBox) -> tuple[dict, int]:
    started = time.perf_counter()
    values = marginal.ch_all(box)
    records = [
        {"settings": list(v.settings), "value": format_rational(v.value)} for v in values
    ]
    maximum = max(v.value for v in values)
    holds = all(Fraction(-1) <= v.value <= 0 for v in values)
    return (
        _report(
            "ch", {}, "pass" if holds else "fail", started,
            values=records, maximum=format_rational(maximum),
        ),
        PASS if holds else VIOLATION,
    )


def run_gm(c: str) -> tuple[dict, int]:
    started = time.perf_counter()
    box = gm.gm_box(parse_rational(c))
    return _report("gm", {"c": c}, "ok", started, box=box_to_dict(box)), PASS


def _certificate_dict(cert: gm.UnphysicalityCertificate) -> dict:
    def bound_dict(b: gm.ParameterBound) -> dict:
        return {
            "symbol": b.symbol,
            "bound": format_rational(b.bound),
            "witness": {
                "name": b.witness.name,
                "events": [_event_dict(e) for e in b.witness.events],
                "total": str(b.witness.total),
            },
        }

    return {
        "c": format_rational(cert.c),
        "upper_bounds": [bound_dict(b) for b in cert.upper_bounds],
        "lower_bound": bound_dict(cert.lower_bound),
        "forced_point": [format_rational(v) for v in cert.forced_point],
        "fine_conditions": [
            {"condition": name, "satisfied": ok}
            for name, ok in cert.fine_check.conditions
        ],
        "lhv_farkas": [format_rational(y) for y in cert.lhv_witness.farkas],
        "verified": gm.verify_unphysicality(cert),
    }


def run_certify_gm(c: str | None, grid: int | None) -> tuple[dict, int]:
    started = time.perf_counter()
    if (c is None) == (grid is None):
        raise BoxError("provide exactly one of --c and --grid")
    if grid is not None:
        if grid < 1:
            raise BoxError("grid must be a positive integer")
        values = [Fraction(k, 3 * grid) for k in range(1, grid + 1)]
    else:
        values = [parse_rational(c)]
    certificates = [_certificate_dict(gm.certify_unphysicality(v)) for v in values]
    ok = all(rec["verified"] for rec in certificates)
    return (
        _report(
            "certify-gm",
            {"c": c, "grid": grid},
            "unphysical" if ok else "unverified",
            started,
            certificates=certificates,
        ),
        PASS if ok else VIOLATION,
    )


def run_noise_threshold(vertex: str) -> tuple[dict, int]:
    started = time.perf_counter()
    boxes = catalog.indeterministic_boxes()
    if vertex not in boxes:
        raise BoxError(f"unknown vertex {vertex!r} (expected I1..I4)")
    threshold = exclusivity.noise_threshold(boxes[vertex])
    return (
        _report(
            "noise-threshold", {"vertex": vertex}, "ok", started,
            threshold=format_rational(threshold),
        ),
        PASS,
    )


def summary_text(report: dict) -> str:
    """One-paragraph human summary of a report."""
    lines = [f"{report['command']}: {report['verdict']}"]
    certs = report.get("certificates", [])
    if certs:
        lines.append(f"  {len(certs)} certificate(s)")
        for cert in certs:
            if "total" in cert:
                events = " ".join(e["display"] for e in cert["events"])
                lines.append(f"    total {cert['total']} from {events}")
            elif cert.get("kind") == "farkas":
                lines.append("    Farkas infeasibility vector present")
            elif cert.get("kind") == "joint":
                lines.append(f"    joint over {len(cert['joint'])} atoms")
            elif "forced_point" in cert:
                point = ", ".join(cert["forced_point"])
                lines.append(f"    c={cert['c']}: forced point ({point}), verified={cert['verified']}")
    if "threshold" in report:
        lines.append(f"  threshold {report['threshold']}")
    if "maximum" in report:
        lines.append(f"  maximum {report['maximum']}")
    if "vertices" in report:
        lines.append(f"  {len(report['vertices'])} vertices")
    return "\n".join(lines)
