"""Shared test helpers: KS statistics and small numeric oracles."""
from __future__ import annotations

import math

import numpy as np
import pytest


def ks_uniform01(samples: np.ndarray) -> float:
    """KS distance between samples and Uniform(0,1)."""
    u = np.sort(np.asarray(samples, dtype=np.float64))
    n = len(u)
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    return float(max(np.max(grid_hi - u), np.max(u - grid_lo)))


def ks_vs_cdf(samples: np.ndarray, cdf, probes: np.ndarray) -> float:
    """Sup over probe points of |empirical CDF - cdf|."""
    x = np.sort(np.asarray(samples, dtype=np.float64))
    n = len(x)
    worst = 0.0
    for p in probes:
        emp = np.searchsorted(x, p, side="right") / n
        worst = max(worst, abs(emp - cdf(float(p))))
    return worst


def ks_discrete(samples: np.ndarray, pmf, support_max: int) -> float:
    """KS distance between integer samples and a pmf given on 1..support_max."""
    samples = np.asarray(samples)
    n = len(samples)
    worst = 0.0
    cum_theory = 0.0
    cum_emp = 0.0
    for j in range(1, support_max + 1):
        cum_theory += pmf(j)
        cum_emp = np.count_nonzero(samples <= j) / n
        worst = max(worst, abs(cum_emp - cum_theory))
    return worst


def trapezoid_integral(f, a: float, b: float, n: int = 1_000_000) -> float:
    """Dead-simple trapezoid rule; the independent check for quadrature."""
    h = (b - a) / n
    total = 0.5 * (f(a) + f(b))
    for i in range(1, n):
        total += f(a + i * h)
    return total * h


def stable_product_miss_prob(n: int, l: int, r: int) -> float:
    """Probability that r of n nodes avoid all l leaders, as a product of
    ratios (the overflow-proof route, used as an oracle)."""
    if r > n - l:
        return 0.0
    p = 1.0
    for i in range(r):
        p *= (n - l - i) / (n - i)
    return p


@pytest.fixture(scope="session")
def api_client():
    from fastapi.testclient import TestClient

    from leaderage.service.app import app

    with TestClient(app) as client:
        yield client
