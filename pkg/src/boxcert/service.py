"""HTTP service wrapping the analyses.

Run with `uvicorn boxcert.service:app`.  Boxes travel in the same JSON
shape as the box file format; all rationals are "p/q" strings.  A
violated property is still a successful analysis, so it returns 200 with
verdict "fail" and certificates; malformed input maps to 400.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, Field

from . import reports
from .model import BoxError, box_from_dict

app = FastAPI(
    title="boxcert",
    description="Exact-rational certificates for black-box probability boxes.",
)


class BoxPayload(BaseModel):
    parties: list[str]
    inputs: dict[str, list[str]]
    outputs: dict[str, int]
    contexts: list[list[str]]
    tables: dict[str, dict[str, str]]


class LORequest(BaseModel):
    box: BoxPayload
    copies: int = Field(default=1, ge=1, le=2)


class ExtendRequest(BaseModel):
    box: BoxPayload
    variables: str = "all"


class Report(BaseModel):
    command: str
    inputs: dict
    verdict: str
    certificates: list = []
    timing_ms: float
    model_config = {"extra": "allow"}


def _box(payload: BoxPayload):
    try:
        return box_from_dict(payload.model_dump())
    except BoxError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def _guard(fn, *args) -> Report:
    try:
        report, _code = fn(*args)
    except (BoxError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return Report(**report)


@app.post("/check-nd", response_model=Report)
def check_nd(box: BoxPayload):
    return _guard(reports.run_check_nd, _box(box))


@app.post("/check-e1", response_model=Report)
def check_e1(box: BoxPayload):
    return _guard(reports.run_check_e1, _box(box))


@app.post("/check-lo", response_model=Report)
def check_lo(request: LORequest):
    return _guard(reports.run_check_lo, _box(request.box), request.copies)


@app.get("/vertices", response_model=Report)
def vertices():
    return _guard(reports.run_vertices)


@app.post("/extend", response_model=Report)
def extend(request: ExtendRequest):
    return _guard(reports.run_extend, _box(request.box), request.variables)


@app.post("/ch", response_model=Report)
def ch(box: BoxPayload):
    return _guard(reports.run_ch, _box(box))


@app.get("/gm", response_model=Report)
def gm(c: str = Query(description="Rational parameter, e.g. 1/6")):
    return _guard(reports.run_gm, c)


@app.get("/certify-gm", response_model=Report)
def certify_gm(
    c: str | None = Query(default=None),
    grid: int | None = Query(default=None, ge=1),
):
    return _guard(reports.run_certify_gm, c, grid)


@app.get("/noise-threshold", response_model=Report)
def noise_threshold(vertex: str = Query(description="One of I1..I4")):
    return _guard(reports.run_noise_threshold, vertex)
