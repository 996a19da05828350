"""FastAPI service wrapping the core computations.

The CLI talks to this app (in process by default); a long-running server
additionally amortizes the lens-table memo cache across requests.  Invalid
input surfaces as 400 with a message; a failed internal consistency check
surfaces as 500 and should be treated as a bug.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from . import __version__
from .catalog import catalog_lookup, label_params, match_candidate
from .knots import (
    AlexanderPoly,
    NotLSpaceKnot,
    cable_alexander,
    t_from_alexander,
    torus_alexander,
)
from .lens import DTable, InvariantError, d_lens_table, d_trefoil_filling
from .schemas import (
    CandidateOut,
    CatalogEntryOut,
    CatalogResponse,
    DTableOut,
    HealthResponse,
    SearchRequest,
    SearchResponse,
    TseqRequest,
    TseqResponse,
    VerifyRequest,
    VerifyResponse,
    fraction_str,
)
from .search import search
from .verify import run_suite

app = FastAPI(title="finsurg", version=__version__)


def default_jobs() -> int:
    env = os.environ.get("FINSURG_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@app.exception_handler(InvariantError)
async def _invariant_handler(request: Request, exc: InvariantError):
    return JSONResponse(status_code=500, content={"detail": f"invariant: {exc}"})


def _dtable_out(table: DTable) -> DTableOut:
    return DTableOut(
        kind=table.kind,
        p=table.p,
        q=table.q,
        values=[fraction_str(v) for v in table.values],
    )


@app.get("/healthz", response_model=HealthResponse)
def healthz():
    return HealthResponse(status="ok", version=__version__)


@app.get("/d/lens/{p}/{q}", response_model=DTableOut)
def get_d_lens(p: int, q: int):
    try:
        return _dtable_out(d_lens_table(p, q))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.get("/d/trefoil/{p}/{q}", response_model=DTableOut)
def get_d_trefoil(p: int, q: int):
    try:
        return _dtable_out(d_trefoil_filling(p, q))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.post("/search", response_model=SearchResponse)
def post_search(req: SearchRequest):
    jobs = req.jobs or default_jobs()
    try:
        cands = search(req.p_max, mode=req.mode, jobs=jobs)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    out = []
    for c in cands:
        m = match_candidate(c)
        out.append(
            CandidateOut(
                p=c.p,
                q=c.q,
                epsilon=c.epsilon,
                a=c.amap.a,
                b=c.amap.b,
                genus=c.genus,
                t_sequence=list(c.t.values),
                match_kind=m.kind,
                match_params=m.params,
            )
        )
    return SearchResponse(p_max=req.p_max, mode=req.mode, count=len(out), candidates=out)


@app.post("/tseq", response_model=TseqResponse)
def post_tseq(req: TseqRequest):
    try:
        if req.alexander is not None:
            poly = AlexanderPoly(tuple(req.alexander))
        elif req.torus is not None:
            poly = torus_alexander(*req.torus)
        else:
            poly = cable_alexander(*req.cable)
    except NotLSpaceKnot as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    try:
        t = t_from_alexander(poly)
    except NotLSpaceKnot as exc:
        return TseqResponse(
            alexander=list(poly.coeffs),
            genus=poly.genus,
            admissible=False,
            reason=str(exc),
        )
    return TseqResponse(
        alexander=list(poly.coeffs),
        genus=poly.genus,
        admissible=True,
        t_sequence=list(t.values),
    )


@app.post("/verify", response_model=VerifyResponse)
def post_verify(req: VerifyRequest):
    report = run_suite(req.suite, seed=req.seed)
    return VerifyResponse(suite=report.suite, passed=report.passed, lines=report.lines)


@app.get("/catalog/{p}", response_model=CatalogResponse)
def get_catalog(p: int):
    entries = []
    for e in catalog_lookup(p):
        kind = type(e.label).__name__.lower()
        if kind == "hyperbolicref":
            kind = "hyperbolic"
        entries.append(
            CatalogEntryOut(p=e.p, kind=kind, params=label_params(e.label), source=e.source)
        )
    return CatalogResponse(p=p, entries=entries)
