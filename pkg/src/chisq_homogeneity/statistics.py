"""Cell counts and the chi-squared type two-sample statistics.

All statistics are functions of the per-cell counts only. With
``r_j = cx_j / n`` and ``s_j = cy_j / l``::

    T1 = n m sum_j (r_j - s_j)^2
    T2 = n sum_j g_j (r_j - s_j)^2 / p_j          (T is T2 with g = 1)
    T3 = T2 - W

where ``W`` collects the diagonal (same observation) terms of ``T2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np

from .core import InvalidArgument, Partition

__all__ = [
    "Weights",
    "TwoSampleCounts",
    "Decomposition",
    "tally",
    "t1_stat",
    "t2_stat",
    "t_stat",
    "w_term",
    "t3_stat",
    "decompose",
    "population_T",
]

DEFAULT_WEIGHT_BOUNDS = (0.1, 10.0)


@dataclass(frozen=True, eq=False)
class Weights:
    """Cell weights ``g_j`` bounded away from 0 and infinity."""

    g: np.ndarray
    bounds: tuple[float, float] = DEFAULT_WEIGHT_BOUNDS

    def __post_init__(self) -> None:
        g = np.array(self.g, dtype=float)
        lo, hi = self.bounds
        if g.ndim != 1 or g.size == 0:
            raise InvalidArgument("weights must be a nonempty vector")
        if not (np.all(g > lo) and np.all(g < hi)):
            raise InvalidArgument(f"weights must lie in ({lo:g}, {hi:g})")
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    @classmethod
    def ones(cls, m: int) -> Weights:
        return cls(np.ones(m))

    def __len__(self) -> int:
        return self.g.size


def _weights_for(part: Partition, w: Weights | None) -> np.ndarray:
    if w is None:
        return np.ones(part.m)
    g = w.g if isinstance(w, Weights) else np.asarray(w, dtype=float)
    if g.shape != (part.m,):
        raise InvalidArgument(f"weights have length {g.size}, partition has {part.m} cells")
    return g


@dataclass(frozen=True, eq=False)
class TwoSampleCounts:
    """Per-cell counts of both samples."""

    part: Partition
    cx: np.ndarray
    cy: np.ndarray
    nx: int = field(init=False)
    ny: int = field(init=False)

    def __post_init__(self) -> None:
        cx = np.array(self.cx, dtype=np.int64)
        cy = np.array(self.cy, dtype=np.int64)
        for name, c in (("cx", cx), ("cy", cy)):
            if c.shape != (self.part.m,):
                raise InvalidArgument(f"{name} must have length {self.part.m}")
            if np.any(c < 0):
                raise InvalidArgument(f"{name} has negative counts")
        nx, ny = int(cx.sum()), int(cy.sum())
        if nx < 1 or ny < 1:
            raise InvalidArgument("both samples must be nonempty")
        cx.setflags(write=False)
        cy.setflags(write=False)
        object.__setattr__(self, "cx", cx)
        object.__setattr__(self, "cy", cy)
        object.__setattr__(self, "nx", nx)
        object.__setattr__(self, "ny", ny)

    @property
    def a(self) -> float:
        """Sample size ratio ``n / l``."""
        return self.nx / self.ny

    @property
    def r_hat(self) -> np.ndarray:
        return self.cx / self.nx

    @property
    def s_hat(self) -> np.ndarray:
        return self.cy / self.ny

    def swapped(self) -> TwoSampleCounts:
        return TwoSampleCounts(self.part, self.cy, self.cx)


def tally(part: Partition, xs, ys) -> TwoSampleCounts:
    """Count both samples per cell (``x = 1`` goes to the last cell)."""
    out = []
    for name, v in (("xs", xs), ("ys", ys)):
        v = np.asarray(v, dtype=float).ravel()
        if v.size == 0:
            raise InvalidArgument(f"{name} is empty")
        bad = np.flatnonzero(~((v >= 0.0) & (v <= 1.0)))
        if bad.size:
            i = int(bad[0])
            raise InvalidArgument(f"{name}[{i}] = {v[i]!r} is outside [0, 1]")
        out.append(np.bincount(part.locate(v), minlength=part.m))
    return TwoSampleCounts(part, out[0], out[1])


def t1_stat(c: TwoSampleCounts) -> float:
    d = c.r_hat - c.s_hat
    return float(c.nx * c.part.m * (d @ d))


def t2_stat(c: TwoSampleCounts, w: Weights | None = None) -> float:
    g = _weights_for(c.part, w)
    d = c.r_hat - c.s_hat
    return float(c.nx * np.sum(g * d**2 / c.part.widths))


def t_stat(c: TwoSampleCounts) -> float:
    return t2_stat(c, None)


def _centers(c: TwoSampleCounts, theta, tau) -> tuple[np.ndarray, np.ndarray]:
    """Cell probabilities used to center the basis in each sample.

    ``None`` means plug-in, i.e. the empirical frequencies.
    """
    p = c.part.widths
    qx = c.r_hat if theta is None else p * (1.0 + np.asarray(theta, dtype=float))
    qy = c.s_hat if tau is None else p * (1.0 + np.asarray(tau, dtype=float))
    return qx, qy


def _diag_sums(counts: np.ndarray, size: int, q: np.ndarray) -> np.ndarray:
    # sum_i (1{X_i in j} - q_j)^2 over one sample
    return counts * (1.0 - q) ** 2 + (size - counts) * q**2


def w_term(c: TwoSampleCounts, w: Weights | None = None, theta=None, tau=None) -> float:
    """Diagonal part ``W`` of ``T2``.

    ``theta`` / ``tau`` give the centering of the basis; by default the
    plug-in estimates are used, which reduces ``W`` to
    ``sum g r(1-r)/p + a sum g s(1-s)/p``.
    """
    g = _weights_for(c.part, w)
    p = c.part.widths
    qx, qy = _centers(c, theta, tau)
    n, l = c.nx, c.ny
    sx = _diag_sums(c.cx, n, qx)
    sy = _diag_sums(c.cy, l, qy)
    return float(np.sum(g * sx / p) / n + n / l**2 * np.sum(g * sy / p))


def t3_stat(c: TwoSampleCounts, w: Weights | None = None) -> float:
    return t2_stat(c, w) - w_term(c, w)


class Decomposition(NamedTuple):
    """``T2 = off_diagonal + linear + shift + diagonal``.

    ``off_diagonal`` gathers the pairwise (distinct observation) terms,
    ``linear`` the terms linear in the centered data, ``shift`` the
    population functional and ``diagonal`` the ``W`` term.
    """

    off_diagonal: float
    linear: float
    shift: float
    diagonal: float

    @property
    def total(self) -> float:
        return self.off_diagonal + self.linear + self.shift + self.diagonal


def decompose(c: TwoSampleCounts, w: Weights | None = None, theta=None, tau=None) -> Decomposition:
    """Split ``T2`` around centering parameters ``theta`` / ``tau`` (plug-in by default)."""
    g = _weights_for(c.part, w)
    p = c.part.widths
    n, l = c.nx, c.ny
    qx, qy = _centers(c, theta, tau)
    eta = (qx - qy) / p
    u = c.cx - n * qx  # sum_i phibar_j(X_i)
    v = c.cy - l * qy
    sx = _diag_sums(c.cx, n, qx)
    sy = _diag_sums(c.cy, l, qy)
    off = np.sum(g / p * ((u**2 - sx) / n + n * (v**2 - sy) / l**2 - 2.0 * u * v / l))
    lin = 2.0 * n * np.sum(g * eta * (u / n - v / l))
    shift = n * np.sum(g * p * eta**2)
    diag = np.sum(g * sx / p) / n + n / l**2 * np.sum(g * sy / p)
    return Decomposition(float(off), float(lin), float(shift), float(diag))


def population_T(
    pair,
    n: int,
    statistic: Literal["T1", "T2", "T"] = "T1",
    weights: Weights | None = None,
) -> float:
    """Functional evaluated at the true cell masses.

    ``T1 -> n m sum p^2 eta^2``, ``T2 -> n sum g p eta^2``, ``T -> n sum p eta^2``.
    """
    part = pair.part
    p = part.widths
    eta = pair.eta
    if statistic == "T1":
        return float(n * part.m * np.sum(p**2 * eta**2))
    if statistic == "T":
        return float(n * np.sum(p * eta**2))
    if statistic == "T2":
        g = _weights_for(part, weights)
        return float(n * np.sum(g * p * eta**2))
    raise InvalidArgument(f"unknown statistic {statistic!r}")
