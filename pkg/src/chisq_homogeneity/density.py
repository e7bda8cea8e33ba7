"""Piecewise-constant densities ``f = 1 + sum_j theta_j phi_j`` on a partition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .core import (
    DomainError,
    InfeasibleTarget,
    InvalidArgument,
    InvalidModel,
    Partition,
    custom_partition,
    equal_partition,
)

__all__ = [
    "CellDensity",
    "AlternativePair",
    "Norms",
    "project_thetas",
    "uniform_density",
    "density_value",
    "cdf",
    "sample",
    "sample_counts",
    "norms",
    "make_alternative",
    "density_from_config",
]

Statistic = Literal["T1", "T2", "T"]

CONSTRAINT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CellDensity:
    """Density ``1 + theta_j`` on cell ``j``, with ``sum_j theta_j p_j = 0``."""

    part: Partition
    theta: np.ndarray

    def __post_init__(self) -> None:
        theta = np.array(self.theta, dtype=float)
        if theta.shape != (self.part.m,):
            raise InvalidArgument(f"theta must have length {self.part.m}, got {theta.shape}")
        if not np.all(np.isfinite(theta)):
            raise InvalidModel("theta must be finite")
        drift = float(theta @ self.part.widths)
        if abs(drift) > CONSTRAINT_TOL:
            raise InvalidModel(f"sum theta_j p_j = {drift:.3g}, expected 0")
        if np.any(1.0 + theta < 0.0):
            j = int(np.argmin(theta))
            raise InvalidModel(f"density is negative on cell {j + 1} (1 + theta = {1 + theta[j]:.3g})")
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)

    @property
    def masses(self) -> np.ndarray:
        """Cell probabilities ``r_j = p_j (1 + theta_j)``."""
        r = self.part.widths * (1.0 + self.theta)
        return np.clip(r, 0.0, None)

    @property
    def values(self) -> np.ndarray:
        """Density value on each cell."""
        return 1.0 + self.theta


@dataclass(frozen=True)
class AlternativePair:
    """Pair ``(F, G)`` of densities on the same partition; ``eta = theta - tau``."""

    f: CellDensity
    g: CellDensity
    eta: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        if not self.f.part.same_as(self.g.part):
            raise InvalidArgument("both densities must live on the same partition")
        eta = self.f.theta - self.g.theta
        eta.setflags(write=False)
        object.__setattr__(self, "eta", eta)

    @classmethod
    def null(cls, density: CellDensity) -> AlternativePair:
        return cls(density, density)

    @property
    def part(self) -> Partition:
        return self.f.part

    @property
    def theta(self) -> np.ndarray:
        return self.f.theta

    @property
    def tau(self) -> np.ndarray:
        return self.g.theta


@dataclass(frozen=True)
class Norms:
    l2_sq: float
    centered_l2_sq: float
    sup: float

    def in_xi(self, C: float) -> bool:
        """Membership in the L2 ball ``||f||^2 < C``."""
        return self.l2_sq < C

    def in_xi1(self, c_n: float, m: int) -> bool:
        """Membership in the sup-norm set ``sup f < c_n sqrt(m)``."""
        return self.sup < c_n * np.sqrt(m)


def project_thetas(part: Partition, raw) -> CellDensity:
    """Center ``raw`` so that ``sum theta_j p_j = 0`` and wrap it as a density."""
    raw = np.asarray(raw, dtype=float)
    if raw.shape != (part.m,):
        raise InvalidArgument(f"raw coefficients must have length {part.m}, got {raw.shape}")
    theta = raw - raw @ part.widths
    if np.any(1.0 + theta < 0.0):
        raise InvalidModel("projected coefficients give a negative density")
    # kill the last ulp of drift so the constraint check cannot trip on roundoff
    drift = theta @ part.widths
    if drift != 0.0:
        theta = theta - drift
    return CellDensity(part, theta)


def uniform_density(part: Partition) -> CellDensity:
    return CellDensity(part, np.zeros(part.m))


def density_value(d: CellDensity, x: float) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x = {x!r} is outside [0, 1]")
    return float(d.values[d.part.locate(x)])


def cdf(d: CellDensity, x: float) -> float:
    """Piecewise-linear distribution function of ``d``."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x = {x!r} is outside [0, 1]")
    if x == 1.0:
        return 1.0
    j = int(d.part.locate(x))
    below = float(d.masses[:j].sum())
    return below + d.values[j] * (x - d.part.edges[j])


def sample(d: CellDensity, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` i.i.d. points: a cell with probability ``r_j``, then uniform inside it."""
    if count < 0:
        raise InvalidArgument("count must be nonnegative")
    if count == 0:
        return np.empty(0)
    r = d.masses
    cum = np.cumsum(r)
    cum /= cum[-1]
    u = rng.random(count)
    cells = np.searchsorted(cum, u, side="right")
    # cum[-1] == 1 > u, so cells < m; zero-mass cells are never selected
    lo = d.part.edges[cells]
    hi = d.part.edges[cells + 1]
    x = lo + rng.random(count) * (hi - lo)
    return np.minimum(x, np.nextafter(hi, 0.0))


def sample_counts(d: CellDensity, count: int, rng: np.random.Generator) -> np.ndarray:
    """Cell counts of ``count`` draws from ``d`` (multinomial, no point positions)."""
    if count < 0:
        raise InvalidArgument("count must be nonnegative")
    r = d.masses
    return rng.multinomial(count, r / r.sum())


def norms(d: CellDensity) -> Norms:
    p = d.part.widths
    return Norms(
        l2_sq=float(p @ (1.0 + d.theta) ** 2),
        centered_l2_sq=float(p @ d.theta**2),
        sup=float(np.max(1.0 + d.theta)),
    )


def _functional_weight(part: Partition, statistic: Statistic, weights) -> np.ndarray:
    """Per-cell ``c_j`` such that the population functional is ``n sum c_j eta_j^2``."""
    p = part.widths
    if statistic == "T1":
        return part.m * p**2
    if statistic == "T":
        return p
    if statistic == "T2":
        g = np.ones(part.m) if weights is None else np.asarray(getattr(weights, "g", weights), float)
        if g.shape != (part.m,):
            raise InvalidArgument("weights do not match the partition")
        return g * p
    raise InvalidArgument(f"unknown statistic {statistic!r}")


def make_alternative(
    part: Partition,
    direction,
    target_T: float,
    n: int,
    statistic: Statistic = "T1",
    weights=None,
    base_theta=None,
) -> AlternativePair:
    """Build ``(F, G)`` with ``tau = theta - s * d`` whose population functional equals ``target_T``.

    ``d`` is the centered ``direction`` and ``theta`` the centered ``base_theta``
    (uniform when omitted). The step ``s`` solves ``n sum c_j s^2 d_j^2 = target_T``.
    """
    if target_T < 0:
        raise InvalidArgument("target_T must be nonnegative")
    f = project_thetas(part, np.zeros(part.m) if base_theta is None else base_theta)
    d = np.asarray(direction, dtype=float)
    if d.shape != (part.m,):
        raise InvalidArgument(f"direction must have length {part.m}")
    d = d - d @ part.widths
    if np.allclose(d, 0.0, atol=1e-14):
        raise InvalidArgument("direction is constant and projects to zero")
    if target_T == 0:
        return AlternativePair(f, f)
    c = _functional_weight(part, statistic, weights)
    s = np.sqrt(target_T / (n * float(c @ d**2)))
    tau = f.theta - s * d
    if np.any(1.0 + tau < 0.0):
        j = int(np.argmin(tau))
        raise InfeasibleTarget(
            f"target {target_T:g} needs 1 + tau = {1 + tau[j]:.3g} < 0 on cell {j + 1}"
        )
    drift = tau @ part.widths
    return AlternativePair(f, CellDensity(part, tau - drift))


def density_from_config(config: dict) -> CellDensity:
    """Density from a mapping with ``edges`` (or ``m``) and ``theta``.

    ``theta`` is projected onto the constraint, so cell-averaged densities of
    any shape can be given as ``value - 1`` per cell.
    """
    if "edges" in config:
        part = custom_partition(config["edges"])
    elif "m" in config:
        part = equal_partition(config["m"])
    else:
        raise InvalidArgument("density config needs 'edges' or 'm'")
    theta = config.get("theta")
    if theta is None:
        return uniform_density(part)
    return project_thetas(part, theta)
