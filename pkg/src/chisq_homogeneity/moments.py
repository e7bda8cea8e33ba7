"""Exact single-observation moments of the basis and mean/variance expansions.

For one observation ``X`` from a cell density with ``q_j = p_j (1 + theta_j)``
the value ``phi_j(X)`` takes ``1 - p_j`` with probability ``q_j`` and ``-p_j``
otherwise, so every moment below is a polynomial in ``(p, theta)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .density import AlternativePair
from .statistics import Weights, _weights_for

__all__ = [
    "PhiMoments",
    "MomentReport",
    "phi_moments",
    "bias_term",
    "t1_theory",
    "t2_theory",
    "exact_mean_t1",
    "exact_mean_t2",
    "gof_theory",
]

VarianceForm = Literal["full", "reduced"]
BiasForm = Literal["exact", "approx", "truncated"]

# Coefficient of the alternative-driven variance addendum. The linear term of
# the statistic is 2 n sum g eta (mean phi), whose variance carries a factor 4.
_ADDENDUM = {"full": 4.0, "reduced": 1.0}


@dataclass(frozen=True)
class PhiMoments:
    """Moments of the basis functions under ``theta``.

    ``m1 = E phi_j``, ``m2 = E phi_j^2``, ``m4 = E (phi_j - E phi_j)^4``.
    ``cross = E phi_j phi_k`` and ``cross4 = E (phi_j - E phi_j)^2 (phi_k - E phi_k)^2``
    for a second, distinct cell ``k``; ``None`` when no second cell is given.
    """

    m1: float
    m2: float
    m4: float
    cross: float | None = None
    cross4: float | None = None


def phi_moments(p: float, theta: float, p2: float | None = None, theta2: float | None = None) -> PhiMoments:
    q = p * (1.0 + theta)
    m1 = theta * p
    m2 = p * (1.0 - p + theta * (1.0 - 2.0 * p))
    m4 = q * (1.0 - 4.0 * q + 6.0 * q**2 - 3.0 * q**3)
    if p2 is None:
        return PhiMoments(m1, m2, m4)
    theta2 = 0.0 if theta2 is None else theta2
    q2 = p2 * (1.0 + theta2)
    cross = -p * p2 * (1.0 + theta + theta2)
    cross4 = q * q2 * (q + q2 - 3.0 * q * q2)
    return PhiMoments(m1, m2, m4, cross, cross4)


@dataclass(frozen=True)
class MomentReport:
    """Leading-order mean and variance of a statistic under a pair ``(F, G)``.

    ``full_sigma_sq = leading_sigma_sq + addendum`` where the addendum is
    driven by ``eta`` and vanishes under the null.
    """

    mean: float
    variance: float
    leading_sigma_sq: float
    full_sigma_sq: float
    shift: float
    centering: float


def _b(pair: AlternativePair, a: float) -> np.ndarray:
    return 1.0 + pair.theta + a + a * pair.tau


def bias_term(pair: AlternativePair, n: int, l: int, w: Weights | None = None, form: BiasForm = "exact") -> float:
    """Expected diagonal term ``e_n`` (exact) or one of its approximations."""
    p = pair.part.widths
    g = _weights_for(pair.part, w)
    a = n / l
    th, ta = pair.theta, pair.tau
    if form == "exact":
        vx = 1.0 - p + th * (1.0 - 2.0 * p) - p * th**2
        vy = 1.0 - p + ta * (1.0 - 2.0 * p) - p * ta**2
    elif form == "approx":
        vx = 1.0 - p + th * (1.0 - p) - p * th**2
        vy = 1.0 - p + ta * (1.0 - p) - p * ta**2
    elif form == "truncated":
        return float(np.sum(g * (1.0 + a + th + ta)))
    else:
        raise ValueError(f"unknown bias form {form!r}")
    return float(np.sum(g * (vx + a * vy)))


def t1_theory(pair: AlternativePair, n: int, l: int, variance_form: VarianceForm = "full") -> MomentReport:
    part = pair.part
    p, m = part.widths, part.m
    a = n / l
    b = _b(pair, a)
    eta = pair.eta
    centering = (m - 1) * (1.0 + a)
    shift = n * m * float(np.sum(p**2 * eta**2))
    leading = 2.0 * m**2 * float(np.sum(p**2 * b**2))
    addendum = _ADDENDUM[variance_form] * n * m**2 * float(np.sum(p**3 * b * eta**2))
    full = leading + addendum
    return MomentReport(centering + shift, full, leading, full, shift, centering)


def t2_theory(
    pair: AlternativePair,
    n: int,
    l: int,
    w: Weights | None = None,
    e_form: BiasForm = "exact",
    variance_form: VarianceForm = "full",
) -> MomentReport:
    part = pair.part
    p = part.widths
    g = _weights_for(part, w)
    a = n / l
    b = _b(pair, a)
    eta = pair.eta
    centering = bias_term(pair, n, l, w, e_form)
    shift = n * float(np.sum(g * p * eta**2))
    leading = 2.0 * float(np.sum(g**2 * b**2))
    addendum = _ADDENDUM[variance_form] * n * float(np.sum(g**2 * p * b * eta**2))
    full = leading + addendum
    return MomentReport(centering + shift, full, leading, full, shift, centering)


def exact_mean_t1(pair: AlternativePair, n: int, l: int) -> float:
    """Finite-sample ``E[T1] = m sum r(1-r) + a m sum s(1-s) + M1``."""
    m = pair.part.m
    r, s = pair.f.masses, pair.g.masses
    shift = n * m * float(np.sum((r - s) ** 2))
    return float(m * np.sum(r * (1 - r)) + n / l * m * np.sum(s * (1 - s)) + shift)


def exact_mean_t2(pair: AlternativePair, n: int, l: int, w: Weights | None = None) -> float:
    """Finite-sample ``E[T2] = e_n + M2`` with the exact bias term."""
    p = pair.part.widths
    g = _weights_for(pair.part, w)
    r, s = pair.f.masses, pair.g.masses
    return float(np.sum(g * (r * (1 - r) + n / l * s * (1 - s) + n * (r - s) ** 2) / p))


def gof_theory(density, n: int, variance_form: VarianceForm = "full") -> MomentReport:
    """Mean and variance of ``n sum (r_hat - p)^2 / p`` against the uniform law."""
    p = density.part.widths
    th = density.theta
    r = density.masses
    centering = float(np.sum(r * (1 - r) / p))
    shift = n * float(np.sum(p * th**2))
    leading = 2.0 * float(np.sum((1.0 + th) ** 2))
    addendum = _ADDENDUM[variance_form] * n * float(np.sum(p * (1.0 + th) * th**2))
    full = leading + addendum
    return MomentReport(centering + shift, full, leading, full, shift, centering)
