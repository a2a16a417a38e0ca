"""FastAPI service exposing the optimizer, simulators, sweeps and verification.

Stateless request/response wrappers over the core package; the CLI offers the
same operations in-process.  Error mapping: malformed strategies and bad
parameters give 400, infeasible or unresolvable inputs give 422.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from . import ops, schemas
from .adversary import adversarial_exit, infeasibility_witness, parse_strategy
from .errors import (HorizonTooShortError, InfeasibleError,
                     NonConvergenceError, StrategyFormatError)
from .sweep import SweepSpec, render_csv, run_sweep
from .verify import run_verification

app = FastAPI(
    title="evacline",
    description="Time-energy trade-offs for two-robot line search under "
                "quadratic-drag energy: optimal speeds with independent "
                "numerical cross-checks, event simulation, parameter sweeps "
                "and adversarial lower bounds.",
    version="0.1.0",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/optimize", response_model=schemas.OptimizeResponse)
def optimize(req: schemas.OptimizeRequest):
    try:
        return ops.optimize_document(req.problem, b=req.b, c=req.c, e=req.e)
    except InfeasibleError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))


@app.post("/simulate", response_model=schemas.OutcomeResponse)
def simulate(req: schemas.SimulateRequest):
    try:
        outcome = ops.run_simulation(req.algo, req.d, s=req.s, r=req.r, e=req.e,
                                     side=req.side, maxspeed=req.maxspeed,
                                     c=req.c, tol=req.tol)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except NonConvergenceError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return outcome.as_dict()


@app.post("/sweep", response_class=PlainTextResponse)
def sweep(req: schemas.SweepRequest):
    try:
        spec = SweepSpec(req.parameter, req.lo, req.hi, req.points, req.scale,
                         problem=req.problem, e=req.e)
        header, rows = run_sweep(spec, req.tol)
    except (ValueError, InfeasibleError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return PlainTextResponse(render_csv(header, rows), media_type="text/csv")


@app.post("/adversary/exit", response_model=schemas.AdversaryReportResponse)
def adversary_exit(req: schemas.AdversaryExitRequest):
    try:
        strategy = parse_strategy(req.strategy)
        report = adversarial_exit(strategy, req.d)
    except StrategyFormatError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except HorizonTooShortError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return report.as_dict()


@app.post("/adversary/witness", response_model=schemas.AdversaryReportResponse)
def adversary_witness(req: schemas.WitnessRequest):
    try:
        strategy = parse_strategy(req.strategy)
        report = infeasibility_witness(req.b, req.c, strategy)
    except (StrategyFormatError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except HorizonTooShortError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return report.as_dict()


@app.post("/verify", response_model=schemas.VerifyResponse)
def verify(req: schemas.VerifyRequest):
    try:
        report = run_verification(req.suites, grid=req.grid, tol=req.tol)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return {
        "passed": report.passed,
        "suites": {res.name: res.passed for res in report.results},
        "report": report.render(),
    }
