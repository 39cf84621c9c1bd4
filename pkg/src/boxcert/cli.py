"""Command-line front end.

Thin client over the report layer (the same layer the HTTP service
wraps): each subcommand reads box files, runs one analysis, prints the
structured report to stdout and a human summary to stderr.  Exit codes:
0 = property holds / success, 2 = property violated (certificates in the
report), 1 = usage or input error.
"""

from __future__ import annotations

import json
import sys

import click

from . import reports
from .model import BoxError, parse_box, serialize_box


def _load_box(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_box(fh.read())
    except OSError as exc:
        raise BoxError(f"cannot read {path}: {exc}") from exc


def _emit(report: dict, code: int, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(report, indent=2, sort_keys=True))
        click.echo(reports.summary_text(report), err=True)
    else:
        click.echo(reports.summary_text(report))
    sys.exit(code)


_format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "text"]), default="json",
    help="Report format on stdout.",
)


@click.group()
def main():
    """Exact-rational certificates for black-box probability boxes."""


def _run(fn, fmt, *args):
    try:
        report, code = fn(*args)
    except (BoxError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    _emit(report, code, fmt)


@main.command("check-nd")
@click.argument("box_file", type=click.Path())
@_format_option
def check_nd(box_file, fmt):
    """Check the no-disturbance consistency equalities."""
    _run(lambda: reports.run_check_nd(_load_box(box_file)), fmt)


@main.command("check-e1")
@click.argument("box_file", type=click.Path())
@_format_option
def check_e1(box_file, fmt):
    """Check the single-copy exclusivity constraints."""
    _run(lambda: reports.run_check_e1(_load_box(box_file)), fmt)


@main.command("check-lo")
@click.argument("box_file", type=click.Path())
@click.option("--copies", type=int, default=1, show_default=True)
@_format_option
def check_lo(box_file, copies, fmt):
    """Check exclusivity on k independent copies (k in {1, 2})."""
    _run(lambda: reports.run_check_lo(_load_box(box_file), copies), fmt)


@main.command("vertices")
@_format_option
def vertices(fmt):
    """Enumerate the 12 vertices of the no-disturbance polytope."""
    _run(reports.run_vertices, fmt)


@main.command("extend")
@click.argument("box_file", type=click.Path())
@click.option("--vars", "variables", type=click.Choice(["all", "sideA", "sideB"]),
              default="all", show_default=True)
@_format_option
def extend(box_file, variables, fmt):
    """Decide joint-extension feasibility with a verifiable witness."""
    _run(lambda: reports.run_extend(_load_box(box_file), variables), fmt)


@main.command("ch")
@click.argument("box_file", type=click.Path())
@_format_option
def ch(box_file, fmt):
    """Evaluate all Clauser-Horne values of a bipartite box."""
    _run(lambda: reports.run_ch(_load_box(box_file)), fmt)


@main.command("gm")
@click.option("--c", "c", required=True, help="Rational parameter, e.g. 1/6.")
def gm_cmd(c):
    """Emit the GM(c) box file."""
    from .gm import gm_box
    from .model import parse_rational

    try:
        box = gm_box(parse_rational(c))
    except (BoxError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(serialize_box(box), nl=False)


@main.command("certify-gm")
@click.option("--c", "c", default=None, help="Rational parameter, e.g. 1/6.")
@click.option("--grid", type=int, default=None,
              help="Certify c = k/(3n) for k = 1..n instead of a single c.")
@_format_option
def certify_gm(c, grid, fmt):
    """Produce verified unphysicality certificates for GM correlations."""
    _run(lambda: reports.run_certify_gm(c, grid), fmt)


@main.command("noise-threshold")
@click.option("--vertex", required=True, help="One of I1..I4.")
@_format_option
def noise_threshold(vertex, fmt):
    """Critical noise weight p for p*I + (1-p)*W."""
    _run(lambda: reports.run_noise_threshold(vertex), fmt)


if __name__ == "__main__":
    main()
