"""Request/response models for the HTTP API.

Distributions are accepted either structured ({"kind": "exp", "rate": 1.0})
or as the CLI spec string ("exp:1"); responses always echo the string form.
"""
from __future__ import annotations

from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field

from .. import distributions as dists

__all__ = [
    "DistField",
    "AnalyticRequest",
    "AnalyticResponse",
    "SimSummaryModel",
    "SimulateRequest",
    "SimulateResponse",
    "SweepRequest",
    "SweepRowModel",
    "SweepResponse",
    "FigureCurveModel",
    "FigureResponse",
    "HealthResponse",
    "dist_to_domain",
    "dist_from_domain",
]


class ExpDistModel(BaseModel):
    kind: Literal["exp"]
    rate: float = Field(gt=0)


class UniformDistModel(BaseModel):
    kind: Literal["uniform"]
    high: float = Field(gt=0)


class DetDistModel(BaseModel):
    kind: Literal["det"]
    value: float = Field(ge=0)


def _coerce_dist(value: object) -> object:
    if isinstance(value, str):
        dist = dists.parse_dist(value)  # raises a ValueError subclass on bad specs
        return dist_from_domain(dist).model_dump()
    return value


DistUnion = Annotated[
    Union[ExpDistModel, UniformDistModel, DetDistModel], Field(discriminator="kind")
]
DistField = Annotated[DistUnion, BeforeValidator(_coerce_dist)]


def dist_to_domain(model: ExpDistModel | UniformDistModel | DetDistModel) -> dists.WriteTimeDistribution:
    if isinstance(model, ExpDistModel):
        return dists.Exponential(model.rate)
    if isinstance(model, UniformDistModel):
        return dists.Uniform(model.high)
    return dists.Deterministic(model.value)


def dist_from_domain(dist: dists.WriteTimeDistribution) -> ExpDistModel | UniformDistModel | DetDistModel:
    if isinstance(dist, dists.Exponential):
        return ExpDistModel(kind="exp", rate=dist.rate)
    if isinstance(dist, dists.Uniform):
        return UniformDistModel(kind="uniform", high=dist.high)
    return DetDistModel(kind="det", value=dist.value)


class _ApiModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)


class AnalyticRequest(_ApiModel):
    n: int = Field(ge=1)
    r: int = Field(ge=1)
    l: Optional[int] = Field(default=None, ge=1)
    c: Optional[float] = Field(default=None, gt=0)
    k: Optional[float] = Field(default=None, gt=0)
    lam: Optional[float] = Field(default=None, gt=0, alias="lambda")
    dist: Optional[DistField] = None
    include_threshold: bool = False
    include_optimal: bool = False


class AnalyticResponse(_ApiModel):
    n: int
    r: int
    l: Optional[int] = None
    c: Optional[float] = None
    k: Optional[float] = None
    lam: Optional[float] = Field(default=None, alias="lambda")
    dist: Optional[str] = None
    prob_b1: Optional[float] = None
    mean_age_b1: Optional[float] = None
    mean_age_b2: Optional[float] = None
    mean_age: Optional[float] = None
    closed_form_age: Optional[float] = None
    threshold_k: Optional[int] = None
    optimal_l: Optional[int] = None
    optimal_age: Optional[float] = None


class SimSummaryModel(_ApiModel):
    mean_age: float
    stderr_age: float
    mean_age_b1: Optional[float] = None
    mean_age_b2: Optional[float] = None
    stderr_age_b1: Optional[float] = None
    stderr_age_b2: Optional[float] = None
    count_b1: int
    count_b2: int
    empirical_pc: Optional[float] = None


class SimulateRequest(_ApiModel):
    n: int = Field(ge=1)
    l: int = Field(ge=1)
    r: int = Field(ge=1)
    c: Optional[float] = Field(default=None, gt=0)
    k: Optional[float] = Field(default=None, gt=0)
    lam: Optional[float] = Field(default=None, gt=0, alias="lambda")
    dist: DistField
    slots: int = Field(default=100_000, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    warmup: Optional[int] = Field(default=None, ge=0)


class SimulateResponse(_ApiModel):
    n: int
    l: int
    r: int
    c: float
    k: Optional[float] = None
    lam: Optional[float] = Field(default=None, alias="lambda")
    dist: str
    slots: int
    seed: int
    warmup: int
    summary: SimSummaryModel
    analytic_age: float
    abs_diff: float


class SweepRequest(_ApiModel):
    vary: Literal["l", "n", "k", "r"]
    start: int
    stop: int
    step: int = Field(default=1, ge=1)
    n: Optional[int] = None
    l: Optional[int] = None
    r: Optional[int] = None
    k: Optional[float] = Field(default=None, gt=0)
    c: Optional[float] = Field(default=None, gt=0)
    lam: float = Field(default=1.0, gt=0, alias="lambda")
    dist: Optional[DistField] = None
    coupling: Optional[tuple[int, int]] = None
    mode: Literal["analytic", "simulate", "both"] = "analytic"
    slots: int = Field(default=100_000, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    curve: str = "sweep"


class SweepRowModel(_ApiModel):
    curve: str
    vary: str
    value: int
    n: int
    l: int
    r: int
    k: Optional[float] = None
    lam: float = Field(alias="lambda")
    c: Optional[float] = None
    mode: str
    analytic_age: Optional[float] = None
    sim_age: Optional[float] = None
    sim_stderr: Optional[float] = None
    skipped: Optional[str] = None


class SweepResponse(_ApiModel):
    rows: list[SweepRowModel]
    monotonicity: Optional[str] = None
    seed: Optional[int] = None


class FigureCurveModel(_ApiModel):
    label: str
    request: SweepRequest
    rows: list[SweepRowModel]


class FigureResponse(_ApiModel):
    figure: str
    mode: str
    seed: Optional[int] = None
    notes: str
    curves: list[FigureCurveModel]


class HealthResponse(_ApiModel):
    status: str
    version: str
