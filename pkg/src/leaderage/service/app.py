"""FastAPI service exposing the analysis, the simulator and sweeps."""
from __future__ import annotations

import secrets
from dataclasses import asdict

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse

from .. import __version__, analytic, sweep as sweeps
from ..distributions import Exponential, dist_spec
from ..errors import InvalidParameterError, ModelDegenerateError
from ..simulation import SimParams, default_warmup_rounds, run
from . import schemas

__all__ = ["app", "create_app"]


def _fresh_seed() -> int:
    return secrets.randbits(63)


def _resolve_lam(req_lam: float | None, dist) -> float:
    """Single-lambda rule: an explicit lambda must agree with an exponential
    distribution's rate; otherwise the rate (or 1.0) is adopted."""
    if req_lam is not None:
        if isinstance(dist, Exponential) and dist.rate != req_lam:
            raise InvalidParameterError(
                f"lambda={req_lam} conflicts with the exponential rate {dist.rate}; "
                "the model uses a single follower write rate"
            )
        return req_lam
    if isinstance(dist, Exponential):
        return dist.rate
    return 1.0


def _timing(c: float | None, k: float | None, lam: float) -> analytic.TimingModel:
    if c is not None and k is not None:
        raise InvalidParameterError("give either an explicit commit time c or k, not both")
    if c is not None:
        return analytic.TimingModel.explicit(c)
    if k is not None:
        return analytic.TimingModel.scaled(k=k, lam=lam)
    raise InvalidParameterError("timing needs either c or k")


def _row_model(row: sweeps.SweepRow) -> schemas.SweepRowModel:
    return schemas.SweepRowModel(
        curve=row.curve, vary=row.vary, value=row.value,
        n=row.n, l=row.l, r=row.r, k=row.k, lam=row.lam, c=row.c, mode=row.mode,
        analytic_age=row.analytic_age, sim_age=row.sim_age,
        sim_stderr=row.sim_stderr, skipped=row.skipped,
    )


def _spec_request(spec: sweeps.SweepSpec) -> schemas.SweepRequest:
    return schemas.SweepRequest(
        vary=spec.vary, start=spec.start, stop=spec.stop, step=spec.step,
        n=spec.n, l=spec.l, r=spec.r, k=spec.k, c=spec.c, lam=spec.lam,
        dist=schemas.dist_from_domain(spec.dist), coupling=spec.coupling,
        mode=spec.mode, slots=spec.query_slots, seed=spec.seed, curve=spec.curve,
    )


def _classification(rows: list[sweeps.SweepRow]) -> str | None:
    ages = [
        row.analytic_age if row.analytic_age is not None else row.sim_age
        for row in rows
        if row.skipped is None
    ]
    ages = [a for a in ages if a is not None]
    if len(ages) < 3:
        return None
    return sweeps.classify_monotonicity(ages)


def create_app() -> FastAPI:
    app = FastAPI(
        title="leaderage",
        version=__version__,
        description="Average read-age analysis for leader-based replicated storage.",
    )

    @app.exception_handler(ModelDegenerateError)
    async def degenerate_handler(request, exc):
        return JSONResponse(status_code=409, content={"error": "model-degenerate", "message": str(exc)})

    @app.exception_handler(InvalidParameterError)
    async def invalid_handler(request, exc):
        return JSONResponse(status_code=400, content={"error": "invalid-parameter", "message": str(exc)})

    @app.get("/api/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/api/analytic", response_model=schemas.AnalyticResponse, response_model_exclude_none=True)
    def analytic_point(req: schemas.AnalyticRequest) -> schemas.AnalyticResponse:
        if req.l is None and not (req.include_threshold or req.include_optimal):
            raise InvalidParameterError(
                "nothing to compute: give l (point analytics) or request the "
                "threshold or the optimal leader count"
            )
        dist = schemas.dist_to_domain(req.dist) if req.dist is not None else None
        lam = _resolve_lam(req.lam, dist)
        out = schemas.AnalyticResponse(n=req.n, r=req.r, l=req.l)

        if req.include_threshold:
            out.threshold_k = analytic.initial_decrease_threshold(req.n, req.r)
        if req.include_optimal:
            if req.k is None:
                raise InvalidParameterError("the optimal leader count needs the scaled model: give k")
            out.optimal_l, out.optimal_age = analytic.optimal_leader_count(req.n, req.r, req.k, lam)

        if req.l is not None:
            cfg = analytic.SystemConfig(n=req.n, l=req.l, r=req.r)
            timing = _timing(req.c, req.k, lam)
            c = timing.commit_time(cfg.l)
            if dist is None:
                dist = Exponential(lam)
            out.c = c
            out.k = req.k
            out.lam = lam
            out.dist = dist_spec(dist)
            out.prob_b1 = analytic.prob_read_hits_leader(cfg)
            out.mean_age_b1 = analytic.mean_age_given_leader(c)
            if analytic.prob_read_misses_leaders(cfg) > 0:
                out.mean_age_b2 = analytic.mean_age_given_followers(cfg, dist, c)
            out.mean_age = analytic.mean_age(cfg, dist, timing)
            if isinstance(dist, Exponential):
                out.closed_form_age = analytic.mean_age_exponential(cfg, dist.rate, c)
        return out

    @app.post("/api/simulate", response_model=schemas.SimulateResponse, response_model_exclude_none=True)
    def simulate(req: schemas.SimulateRequest) -> schemas.SimulateResponse:
        cfg = analytic.SystemConfig(n=req.n, l=req.l, r=req.r)
        dist = schemas.dist_to_domain(req.dist)
        lam = _resolve_lam(req.lam, dist)
        timing = _timing(req.c, req.k, lam)
        c = timing.commit_time(cfg.l)
        seed = req.seed if req.seed is not None else _fresh_seed()
        params = SimParams(
            cfg=cfg, timing=timing, dist=dist,
            query_slots=req.slots, seed=seed, warmup_rounds=req.warmup,
        )
        summary = run(params)
        if req.warmup is not None:
            warmup = req.warmup
        elif cfg.followers == 0 or cfg.r > cfg.followers:
            warmup = 0
        else:
            warmup = default_warmup_rounds(dist, c)
        reference = analytic.mean_age(cfg, dist, timing)
        return schemas.SimulateResponse(
            n=cfg.n, l=cfg.l, r=cfg.r, c=c, k=req.k, lam=lam,
            dist=dist_spec(dist), slots=req.slots, seed=seed, warmup=warmup,
            summary=schemas.SimSummaryModel(**asdict(summary)),
            analytic_age=reference,
            abs_diff=abs(summary.mean_age - reference),
        )

    @app.post("/api/sweep", response_model=schemas.SweepResponse, response_model_exclude_none=True)
    def sweep_endpoint(req: schemas.SweepRequest) -> schemas.SweepResponse:
        dist = schemas.dist_to_domain(req.dist) if req.dist is not None else None
        lam = _resolve_lam(req.lam, dist)
        if dist is None:
            dist = Exponential(lam)
        seed = req.seed
        if seed is None:
            seed = _fresh_seed() if req.mode != "analytic" else 0
        spec = sweeps.SweepSpec(
            vary=req.vary, start=req.start, stop=req.stop, step=req.step,
            n=req.n, l=req.l, r=req.r, k=req.k, c=req.c, lam=lam, dist=dist,
            coupling=req.coupling, mode=req.mode, query_slots=req.slots,
            seed=seed, curve=req.curve,
        )
        rows = sweeps.run_sweep(spec)
        return schemas.SweepResponse(
            rows=[_row_model(row) for row in rows],
            monotonicity=_classification(rows),
            seed=seed if req.mode != "analytic" else None,
        )

    @app.get("/api/figures/{figure_id}", response_model=schemas.FigureResponse, response_model_exclude_none=True)
    def figure(
        figure_id: str,
        mode: str = Query(default="analytic"),
        slots: int = Query(default=100_000, ge=1),
        seed: int | None = Query(default=None, ge=0),
    ) -> schemas.FigureResponse:
        if mode not in sweeps.SWEEP_MODES:
            raise InvalidParameterError(f"mode must be one of {sweeps.SWEEP_MODES}, got {mode!r}")
        master = seed
        if master is None:
            master = _fresh_seed() if mode != "analytic" else 0
        specs = sweeps.figure_preset(figure_id, mode=mode, query_slots=slots, seed=master)
        curves = [
            schemas.FigureCurveModel(
                label=spec.curve,
                request=_spec_request(spec),
                rows=[_row_model(row) for row in sweeps.run_sweep(spec)],
            )
            for spec in specs
        ]
        return schemas.FigureResponse(
            figure=figure_id,
            mode=mode,
            seed=master if mode != "analytic" else None,
            notes=sweeps.FIGURE_NOTES[figure_id],
            curves=curves,
        )

    return app


app = create_app()
