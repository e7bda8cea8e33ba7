"""Plug-in estimates of the cell coefficients, variances and bias."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .statistics import TwoSampleCounts, Weights, _weights_for

__all__ = ["EstimatedScale", "estimate_scales", "estimate_bias"]


@dataclass(frozen=True)
class EstimatedScale:
    sigma1_sq_hat: float
    sigma2_sq_hat: float
    e_hat: float
    theta_hat: np.ndarray
    tau_hat: np.ndarray
    degenerate: bool = False

    @property
    def sigma1_hat(self) -> float:
        return float(np.sqrt(self.sigma1_sq_hat))

    @property
    def sigma2_hat(self) -> float:
        return float(np.sqrt(self.sigma2_sq_hat))


def estimate_bias(c: TwoSampleCounts, w: Weights | None = None, form: str = "exact") -> float:
    """``e_n`` with ``theta_hat``, ``tau_hat`` substituted.

    ``exact`` uses the per-cell variance ``1 - p + theta (1 - 2p) - p theta^2``;
    ``approx`` the ``(1 - p)`` variant and ``truncated`` keeps only
    ``sum g (1 + a + theta + tau)``.
    """
    p = c.part.widths
    g = _weights_for(c.part, w)
    th = c.r_hat / p - 1.0
    ta = c.s_hat / p - 1.0
    a = c.a
    if form == "truncated":
        return float(np.sum(g * (1.0 + a + th + ta)))
    k = 2.0 if form == "exact" else 1.0 if form == "approx" else None
    if k is None:
        raise ValueError(f"unknown bias form {form!r}")
    vx = 1.0 - p + th * (1.0 - k * p) - p * th**2
    vy = 1.0 - p + ta * (1.0 - k * p) - p * ta**2
    return float(np.sum(g * (vx + a * vy)))


def estimate_scales(c: TwoSampleCounts, w: Weights | None = None, e_form: str = "exact") -> EstimatedScale:
    p = c.part.widths
    m = c.part.m
    g = _weights_for(c.part, w)
    r, s, a = c.r_hat, c.s_hat, c.a
    mix = r + a * s
    sigma1_sq = 2.0 * m**2 * float(np.sum(mix**2))
    sigma2_sq = 2.0 * float(np.sum(g**2 * mix**2 / p**2))
    # every observation in one cell: the statistic carries no spread information
    degenerate = bool(np.count_nonzero(c.cx + c.cy) == 1)
    return EstimatedScale(
        sigma1_sq_hat=sigma1_sq,
        sigma2_sq_hat=sigma2_sq,
        e_hat=estimate_bias(c, w, e_form),
        theta_hat=r / p - 1.0,
        tau_hat=s / p - 1.0,
        degenerate=degenerate,
    )
