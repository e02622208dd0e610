"""Parameter sweeps over the replication model, plus canned figure presets."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .analytic import SystemConfig, TimingModel, mean_age, mean_age_scaled
from .distributions import Exponential, WriteTimeDistribution
from .errors import InvalidParameterError
from .simulation import SimParams, derive_run_seed, run

__all__ = [
    "SWEEP_VARIABLES",
    "SWEEP_MODES",
    "FIGURE_IDS",
    "FIGURE_NOTES",
    "SweepSpec",
    "SweepRow",
    "run_sweep",
    "classify_monotonicity",
    "figure_preset",
]

SWEEP_VARIABLES = ("l", "n", "k", "r")
SWEEP_MODES = ("analytic", "simulate", "both")
FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5")

FIGURE_NOTES = {
    "fig2": "age vs leader count; n=50, r=1, lambda=1, one curve per k in {50, 100, 150}",
    "fig3": "age vs leader count; n=50, r=5, lambda=1, one curve per k in {50, 100, 150}",
    "fig4": "age vs node count; l=5, r=10, lambda=1, one curve per k in {50, 100, 150}",
    "fig5": "age vs node count; l=5, lambda=1, query size coupled as r = 10 + n//20, "
    "one curve per k in {50, 100, 150}",
}


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: vary a single integer parameter, hold the rest fixed.

    ``coupling=(a, b)`` derives the query size as r = a + n//b at every point
    instead of the fixed ``r``. Points that violate topology invariants are
    emitted as skipped rows rather than dropped.
    """

    vary: str
    start: int
    stop: int
    step: int = 1
    n: int | None = None
    l: int | None = None
    r: int | None = None
    k: float | None = None
    c: float | None = None
    lam: float = 1.0
    dist: WriteTimeDistribution = Exponential(1.0)
    coupling: tuple[int, int] | None = None
    mode: str = "analytic"
    query_slots: int = 100_000
    seed: int = 0
    curve: str = "sweep"

    def __post_init__(self) -> None:
        if self.vary not in SWEEP_VARIABLES:
            raise InvalidParameterError(f"vary must be one of {SWEEP_VARIABLES}, got {self.vary!r}")
        if self.mode not in SWEEP_MODES:
            raise InvalidParameterError(f"mode must be one of {SWEEP_MODES}, got {self.mode!r}")
        if not (isinstance(self.step, int) and self.step >= 1):
            raise InvalidParameterError(f"step must be an integer >= 1, got {self.step}")
        if self.start > self.stop:
            raise InvalidParameterError(f"empty range: start {self.start} > stop {self.stop}")
        if self.c is not None and (self.k is not None or self.vary == "k"):
            raise InvalidParameterError("give either an explicit commit time c or k, not both")
        if self.c is None and self.k is None and self.vary != "k":
            raise InvalidParameterError("timing needs either c or k")
        if not self.lam > 0:
            raise InvalidParameterError(f"lam must be > 0, got {self.lam}")
        for name in ("n", "l"):
            if name != self.vary and getattr(self, name) is None:
                raise InvalidParameterError(f"fixed parameter {name} is required")
        if self.vary != "r" and self.r is None and self.coupling is None:
            raise InvalidParameterError("fixed parameter r is required (or a coupling rule)")
        if self.coupling is not None:
            a, b = self.coupling
            if not (isinstance(a, int) and isinstance(b, int) and a >= 0 and b >= 1):
                raise InvalidParameterError(f"coupling must be integers (a >= 0, b >= 1), got {self.coupling}")
            if self.vary == "r":
                raise InvalidParameterError("cannot vary r and couple it to n at the same time")
        if not (isinstance(self.query_slots, int) and self.query_slots >= 1):
            raise InvalidParameterError(f"query_slots must be >= 1, got {self.query_slots}")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise InvalidParameterError(f"seed must be a nonnegative integer, got {self.seed}")

    def points(self) -> range:
        return range(self.start, self.stop + 1, self.step)


@dataclass(frozen=True)
class SweepRow:
    """One sweep point. Analytic and simulated ages are reported side by
    side, never reconciled; invalid points carry a skip reason instead."""

    curve: str
    vary: str
    value: int
    n: int
    l: int
    r: int
    k: float | None
    lam: float
    c: float | None
    mode: str
    analytic_age: float | None = None
    sim_age: float | None = None
    sim_stderr: float | None = None
    skipped: str | None = None


def _point_params(spec: SweepSpec, value: int) -> tuple[int, int, int, float | None]:
    n = value if spec.vary == "n" else spec.n
    l = value if spec.vary == "l" else spec.l
    r = value if spec.vary == "r" else spec.r
    k = float(value) if spec.vary == "k" else spec.k
    if spec.coupling is not None:
        a, b = spec.coupling
        r = a + n // b
    return n, l, r, k


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate every point of the sweep, ascending in the varied parameter."""
    rows: list[SweepRow] = []
    for index, value in enumerate(spec.points()):
        n, l, r, k = _point_params(spec, value)
        base = dict(
            curve=spec.curve, vary=spec.vary, value=value,
            n=n, l=l, r=r, k=k, lam=spec.lam, mode=spec.mode,
        )
        try:
            cfg = SystemConfig(n=n, l=l, r=r)
            timing = (
                TimingModel.explicit(spec.c) if spec.c is not None
                else TimingModel.scaled(k=k, lam=spec.lam)
            )
            c = timing.commit_time(l)
        except InvalidParameterError as exc:
            rows.append(SweepRow(c=spec.c, skipped=str(exc), **base))
            continue

        analytic_age = None
        if spec.mode in ("analytic", "both"):
            analytic_age = _analytic_age(cfg, spec.dist, timing)
        sim_age = sim_stderr = None
        if spec.mode in ("simulate", "both"):
            params = SimParams(
                cfg=cfg, timing=timing, dist=spec.dist,
                query_slots=spec.query_slots,
                seed=derive_run_seed(spec.seed, index),
            )
            summary = run(params)
            sim_age, sim_stderr = summary.mean_age, summary.stderr_age
        rows.append(SweepRow(
            c=c, analytic_age=analytic_age, sim_age=sim_age, sim_stderr=sim_stderr, **base,
        ))
    if all(row.skipped is not None for row in rows):
        raise InvalidParameterError(f"every point of the sweep is invalid: {rows[0].skipped}")
    return rows


def _analytic_age(cfg: SystemConfig, dist: WriteTimeDistribution, timing: TimingModel) -> float:
    # the scaled exponential model has an exact rational evaluation; use it
    # whenever it applies so flat regimes are flat to the last bit
    if timing.is_scaled and isinstance(dist, Exponential) and dist.rate == timing.lam:
        return mean_age_scaled(cfg.n, cfg.l, cfg.r, timing.k, timing.lam)
    return mean_age(cfg, dist, timing)


def classify_monotonicity(ages: Sequence[float], *, eps: float = 1e-9) -> str:
    """Classify a sweep's age sequence.

    flat: total variation within eps; increasing/decreasing: every step
    strictly beyond eps; interior_minimum: strictly decreasing then strictly
    increasing; anything else: other.
    """
    values = [float(a) for a in ages]
    if len(values) < 3:
        raise InvalidParameterError(f"need at least 3 points to classify, got {len(values)}")
    if max(values) - min(values) <= eps:
        return "flat"
    signs = []
    for prev, cur in zip(values, values[1:]):
        d = cur - prev
        signs.append(1 if d > eps else -1 if d < -eps else 0)
    if all(s == 1 for s in signs):
        return "increasing"
    if all(s == -1 for s in signs):
        return "decreasing"
    if 0 not in signs:
        flips = [i for i, (a, b) in enumerate(zip(signs, signs[1:])) if a != b]
        if len(flips) == 1 and signs[0] == -1 and signs[-1] == 1:
            return "interior_minimum"
    return "other"


def figure_preset(
    figure_id: str,
    *,
    mode: str = "analytic",
    query_slots: int = 100_000,
    seed: int = 0,
) -> list[SweepSpec]:
    """Sweep specs for the canned figures, one spec per curve.

    Curves share the k grid {50, 100, 150}; each curve gets an independent
    random stream derived from the master seed.
    """
    if figure_id not in FIGURE_IDS:
        raise InvalidParameterError(f"unknown figure {figure_id!r}; expected one of {FIGURE_IDS}")
    if figure_id in ("fig2", "fig3"):
        base = SweepSpec(
            vary="l", start=1, stop=45, n=50, r=(1 if figure_id == "fig2" else 5),
            k=50.0, lam=1.0, dist=Exponential(1.0), mode=mode, query_slots=query_slots,
        )
    elif figure_id == "fig4":
        base = SweepSpec(
            vary="n", start=20, stop=200, step=20, l=5, r=10,
            k=50.0, lam=1.0, dist=Exponential(1.0), mode=mode, query_slots=query_slots,
        )
    else:
        base = SweepSpec(
            vary="n", start=20, stop=200, step=20, l=5, coupling=(10, 20),
            k=50.0, lam=1.0, dist=Exponential(1.0), mode=mode, query_slots=query_slots,
        )
    return [
        replace(base, k=float(k), curve=f"k={k}", seed=derive_run_seed(seed, ci))
        for ci, k in enumerate((50, 100, 150))
    ]
