"""Write-time laws for follower nodes.

A follower receives a committed update after a random write time. Each law
here exposes its CDF, seeded sampling, and the integral of the r-th power of
its survival function over a commit window, which is the quantity that drives
the staleness of multi-node reads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, ClassVar, Union

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "Exponential",
    "Uniform",
    "Deterministic",
    "WriteTimeDistribution",
    "parse_dist",
    "dist_spec",
    "survival_power_integral",
    "adaptive_simpson",
]

#: Absolute tolerance and recursion cap for the adaptive quadrature fallback.
QUAD_ABS_TOL = 1e-10
QUAD_MAX_DEPTH = 60


@dataclass(frozen=True)
class Exponential:
    """Exponential write time with the given rate (mean ``1/rate``)."""

    rate: float
    kind: ClassVar[str] = "exp"

    def __post_init__(self) -> None:
        if not self.rate > 0:
            raise InvalidParameterError(f"exponential rate must be > 0, got {self.rate}")

    def cdf(self, t: float) -> float:
        if t < 0:
            return 0.0
        return -math.expm1(-self.rate * t)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.exponential(scale=1.0 / self.rate, size=size)

    def spec_args(self) -> tuple[float, ...]:
        return (self.rate,)


@dataclass(frozen=True)
class Uniform:
    """Write time uniform on ``[0, high)``."""

    high: float
    kind: ClassVar[str] = "uniform"

    def __post_init__(self) -> None:
        if not self.high > 0:
            raise InvalidParameterError(f"uniform upper bound must be > 0, got {self.high}")

    def cdf(self, t: float) -> float:
        if t < 0:
            return 0.0
        return min(t / self.high, 1.0)

    def sample(self, rng: np.random.Generator, size=None):
        return rng.uniform(0.0, self.high, size=size)

    def spec_args(self) -> tuple[float, ...]:
        return (self.high,)


@dataclass(frozen=True)
class Deterministic:
    """Write time equal to a fixed value; the CDF is right-continuous at
    the step, so ``cdf(value) == 1``."""

    value: float
    kind: ClassVar[str] = "det"

    def __post_init__(self) -> None:
        if not self.value >= 0:
            raise InvalidParameterError(f"deterministic value must be >= 0, got {self.value}")

    def cdf(self, t: float) -> float:
        return 1.0 if t >= self.value else 0.0

    def sample(self, rng: np.random.Generator, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value, dtype=np.float64)

    def spec_args(self) -> tuple[float, ...]:
        return (self.value,)


WriteTimeDistribution = Union[Exponential, Uniform, Deterministic]

_KINDS = {"exp": Exponential, "uniform": Uniform, "det": Deterministic}


def parse_dist(spec: str) -> WriteTimeDistribution:
    """Parse a distribution spec string: ``exp:RATE``, ``uniform:B`` or ``det:D``."""
    kind, sep, arg = spec.partition(":")
    cls = _KINDS.get(kind.strip())
    if cls is None:
        raise InvalidParameterError(
            f"unknown distribution {spec!r}; expected exp:RATE, uniform:B or det:D"
        )
    if not sep or not arg.strip():
        raise InvalidParameterError(f"distribution {spec!r} is missing its parameter")
    try:
        value = float(arg)
    except ValueError:
        raise InvalidParameterError(f"distribution parameter {arg!r} is not a number") from None
    return cls(value)


def dist_spec(dist: WriteTimeDistribution) -> str:
    """Inverse of :func:`parse_dist`."""
    (arg,) = dist.spec_args()
    return f"{dist.kind}:{arg:g}"


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = QUAD_ABS_TOL,
    max_depth: int = QUAD_MAX_DEPTH,
) -> float:
    """Adaptive Simpson quadrature of ``f`` on ``[a, b]`` to absolute tolerance.

    Uses the standard interval-halving scheme with Richardson correction; the
    local acceptance test is the usual 15x factor against the halved tolerance.
    """
    if b <= a:
        return 0.0

    def simpson(fa: float, fm: float, fb: float, width: float) -> float:
        return width / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, m, b, fa, fm, fb, whole, tol, depth):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = f(lm)
        frm = f(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        err = left + right - whole
        if depth >= max_depth or abs(err) <= 15.0 * tol:
            return left + right + err / 15.0
        return recurse(a, lm, m, fa, flm, fm, left, tol / 2.0, depth + 1) + recurse(
            m, rm, b, fm, frm, fb, right, tol / 2.0, depth + 1
        )

    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    return recurse(a, m, b, fa, fm, fb, simpson(fa, fm, fb, b - a), tol, 0)


def survival_power_integral(
    dist: WriteTimeDistribution,
    c: float,
    r: int,
    *,
    method: str = "auto",
    tol: float = QUAD_ABS_TOL,
) -> float:
    """Integral over ``[0, c]`` of the r-th power of the survival function.

    ``method="auto"`` uses a closed form where one exists (exponential,
    deterministic) and adaptive Simpson quadrature otherwise;
    ``method="quadrature"`` forces the numeric route for any law.
    """
    if not c > 0:
        raise InvalidParameterError(f"commit time c must be > 0, got {c}")
    if not (isinstance(r, (int, np.integer)) and r >= 1):
        raise InvalidParameterError(f"query size r must be an integer >= 1, got {r}")
    if method not in ("auto", "quadrature"):
        raise InvalidParameterError(f"unknown integration method {method!r}")

    if method == "auto":
        if isinstance(dist, Exponential):
            # antiderivative of e^{-rate*r*t}
            a = dist.rate * r
            return -math.expm1(-a * c) / a
        if isinstance(dist, Deterministic):
            # survival is identically 1 before the step and 0 after it
            return min(dist.value, c)

    def integrand(t: float) -> float:
        return (1.0 - dist.cdf(t)) ** r

    return adaptive_simpson(integrand, 0.0, c, tol=tol)
