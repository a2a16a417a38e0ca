"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class OptimizeRequest(BaseModel):
    problem: Literal["ec", "wec", "we"]
    b: float = Field(1.0, gt=0)
    c: Optional[float] = Field(None, gt=0)
    e: Optional[float] = Field(None, gt=0)


class ClosedFormResult(BaseModel):
    s: float
    r: float
    regime: str
    factor: float
    energy_per_d: Optional[float] = None
    time_per_d: Optional[float] = None


class NumericalResult(BaseModel):
    s: float
    r: float
    objective: float


class KktSummary(BaseModel):
    active_set: list[str]
    multipliers: dict[str, float]
    stationarity_residual: float
    verdict: bool


class OptimizeResponse(BaseModel):
    problem: str
    params: dict[str, float]
    closed_form: ClosedFormResult
    numerical: NumericalResult
    agreement: float
    kkt: KktSummary
    verified: bool


class SimulateRequest(BaseModel):
    algo: Literal["naive", "functional"]
    d: float = Field(gt=0)
    s: Optional[float] = Field(None, gt=0)
    r: Optional[float] = Field(None, gt=0)
    e: Optional[float] = Field(None, gt=0)
    c: Optional[float] = Field(None, gt=0)
    side: Literal["positive", "negative"] = "positive"
    maxspeed: float = Field(1.0, gt=0)
    tol: float = Field(1e-10, gt=0)


class OutcomeResponse(BaseModel):
    evacuation_time: float
    finder_energy: float
    nonfinder_energy: float
    total_energy: float
    makespan_energy: float
    feasible: bool
    violated_constraints: list[str]


class SweepRequest(BaseModel):
    parameter: Literal["cb", "e", "d"]
    lo: float
    hi: float
    points: int = Field(ge=2)
    scale: Literal["linear", "geometric"] = "linear"
    problem: Optional[Literal["wec", "we"]] = None
    e: Optional[float] = Field(None, gt=0)
    tol: float = Field(1e-10, gt=0)


class AdversaryExitRequest(BaseModel):
    strategy: str  # line format: header `maxspeed <b> horizon <T>`, then segments
    d: float = Field(gt=0)


class WitnessRequest(BaseModel):
    b: float = Field(gt=0)
    c: float = Field(gt=0)
    strategy: str


class AdversaryReportResponse(BaseModel):
    exit_distance: float
    exit_side: Literal["positive", "negative"]
    induced_time: float
    ratio: float
    violated_bound: Optional[str] = None


class VerifyRequest(BaseModel):
    suites: Optional[list[str]] = None
    grid: int = Field(200, ge=1)
    tol: float = Field(1e-10, gt=0)


class VerifyResponse(BaseModel):
    passed: bool
    suites: dict[str, bool]
    report: str


SCHEMA_MODELS = [
    OptimizeRequest, OptimizeResponse, SimulateRequest, OutcomeResponse,
    SweepRequest, AdversaryExitRequest, WitnessRequest,
    AdversaryReportResponse, VerifyRequest, VerifyResponse,
]


def export_schema() -> dict:
    """JSON schema of every wire model, keyed by model name."""
    return {model.__name__: model.model_json_schema() for model in SCHEMA_MODELS}
