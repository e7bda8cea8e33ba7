"""Studentized decision rules K1, K2, K3 and the one-sample goodness-of-fit test."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import special

from .core import DomainError, InvalidArgument, Partition
from .estimators import estimate_scales
from .statistics import TwoSampleCounts, Weights, t1_stat, t2_stat, w_term

__all__ = [
    "TestReport",
    "normal_cdf",
    "normal_sf",
    "normal_quantile",
    "critical_value",
    "run_test",
    "gof_test",
    "gof_test_counts",
]

Kind = Literal["K1", "K2", "K3"]
KINDS = ("K1", "K2", "K3", "GoF")

REPORT_FIELDS = (
    "statistic", "centering", "scale", "z", "alpha", "x_alpha",
    "reject", "p_value", "kind", "m", "n", "l", "a",
)


def normal_cdf(x: float) -> float:
    return float(special.ndtr(x))


def normal_sf(x: float) -> float:
    """Upper tail ``1 - Phi(x)`` without cancellation."""
    return float(special.ndtr(-x))


def normal_quantile(q: float) -> float:
    q = float(q)
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile level {q!r} must lie strictly inside (0, 1)")
    return float(special.ndtri(q))


def critical_value(alpha: float) -> float:
    """``x_alpha`` with ``1 - Phi(x_alpha) = alpha``."""
    if not 0.0 < alpha < 1.0:
        raise InvalidArgument(f"alpha = {alpha!r} must lie in (0, 1)")
    return -normal_quantile(alpha)


@dataclass(frozen=True)
class TestReport:
    """Outcome of one studentized test: reject iff ``z > x_alpha``."""

    __test__ = False  # keep pytest from collecting this class

    statistic: float
    centering: float
    scale: float
    z: float
    alpha: float
    x_alpha: float
    reject: bool
    p_value: float
    kind: str
    m: int
    n: int
    l: int | None
    a: float | None
    degenerate: bool = field(default=False, compare=False)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in REPORT_FIELDS}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _report(statistic, centering, scale, alpha, kind, m, n, l, a, degenerate=False) -> TestReport:
    x_alpha = critical_value(alpha)
    z = (statistic - centering) / scale
    return TestReport(
        statistic=float(statistic),
        centering=float(centering),
        scale=float(scale),
        z=float(z),
        alpha=float(alpha),
        x_alpha=x_alpha,
        reject=bool(z > x_alpha),
        p_value=normal_sf(z),
        kind=kind,
        m=m,
        n=n,
        l=l,
        a=a,
        degenerate=degenerate,
    )


def run_test(
    c: TwoSampleCounts,
    kind: Kind = "K1",
    w: Weights | None = None,
    alpha: float = 0.05,
    e_form: str = "exact",
) -> TestReport:
    """Apply K1, K2 or K3 to the counts.

    K1 centers ``T1`` at ``m (1 + a)`` and scales by ``sigma1_hat``; K2 centers
    ``T2`` at ``e_hat``; K3 uses ``T2 - W`` uncentered. K2 and K3 scale by
    ``sigma2_hat``.
    """
    est = estimate_scales(c, w, e_form=e_form)
    m = c.part.m
    if kind == "K1":
        stat, center, scale = t1_stat(c), m * (1.0 + c.a), est.sigma1_hat
    elif kind == "K2":
        stat, center, scale = t2_stat(c, w), est.e_hat, est.sigma2_hat
    elif kind == "K3":
        stat, center, scale = t2_stat(c, w) - w_term(c, w), 0.0, est.sigma2_hat
    else:
        raise InvalidArgument(f"unknown test kind {kind!r}")
    return _report(stat, center, scale, alpha, kind, m, c.nx, c.ny, c.a, est.degenerate)


def gof_test_counts(part: Partition, counts, alpha: float = 0.05) -> TestReport:
    """Goodness of fit to the uniform law from cell counts."""
    counts = np.asarray(counts, dtype=np.int64)
    n = int(counts.sum())
    if n < 1:
        raise InvalidArgument("sample is empty")
    p = part.widths
    r = counts / n
    stat = n * float(np.sum((r - p) ** 2 / p))
    m = part.m
    degenerate = bool(np.count_nonzero(counts) == 1)
    return _report(stat, m - 1, np.sqrt(2.0 * m), alpha, "GoF", m, n, None, None, degenerate)


def gof_test(part: Partition, xs, alpha: float = 0.05) -> TestReport:
    """Chi-squared test of ``F = uniform`` standardized by ``(m - 1, sqrt(2m))``."""
    xs = np.asarray(xs, dtype=float).ravel()
    if xs.size == 0:
        raise InvalidArgument("sample is empty")
    return gof_test_counts(part, np.bincount(part.locate(xs), minlength=part.m), alpha)
