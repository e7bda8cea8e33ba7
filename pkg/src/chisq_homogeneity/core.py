"""Cell partitions of [0, 1] and the centered indicator basis."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "InvalidArgument",
    "DomainError",
    "InvalidModel",
    "InfeasibleTarget",
    "Partition",
    "equal_partition",
    "custom_partition",
    "cell_index",
    "phi_eval",
]

DEFAULT_BALANCE = (0.5, 2.0)


class InvalidArgument(ValueError):
    """Raised for malformed arguments (bad sizes, bad cell indices, ...)."""


class DomainError(ValueError):
    """Raised when a point lies outside [0, 1]."""


class InvalidModel(ValueError):
    """Raised when coefficients do not define a density."""


class InfeasibleTarget(InvalidModel):
    """Raised when an alternative cannot reach the requested functional value."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Partition:
    """Partition of [0, 1] into ``m`` half-open cells ``[e_{j-1}, e_j)``.

    The last cell is closed on the right so that ``x = 1`` has a home.

    Attributes
    ----------
    edges : ndarray, shape (m + 1,)
        Strictly increasing, ``edges[0] == 0`` and ``edges[-1] == 1``.
    widths : ndarray, shape (m,)
        Cell widths ``p_j``.
    """

    edges: np.ndarray
    widths: np.ndarray = field(init=False)

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=float)
        if edges.ndim != 1 or edges.size < 3:
            raise InvalidArgument("a partition needs at least two cells")
        if not np.all(np.isfinite(edges)):
            raise InvalidArgument("edges must be finite")
        if edges[0] != 0.0 or edges[-1] != 1.0:
            raise InvalidArgument(
                f"edges must start at 0 and end at 1, got {edges[0]!r}..{edges[-1]!r}"
            )
        widths = np.diff(edges)
        if np.any(widths <= 0):
            bad = int(np.flatnonzero(widths <= 0)[0])
            raise InvalidArgument(f"edges must be strictly increasing (cell {bad + 1})")
        object.__setattr__(self, "edges", _frozen(edges))
        object.__setattr__(self, "widths", _frozen(widths))

    @property
    def m(self) -> int:
        return self.widths.size

    @property
    def balance_ratio(self) -> float:
        """``max(m p_j) / min(m p_j)``; 1 for equal cells."""
        return float(self.widths.max() / self.widths.min())

    def is_balanced(self, c: float = DEFAULT_BALANCE[0], C1: float = DEFAULT_BALANCE[1]) -> bool:
        """Whether ``c < m p_j < C1`` for every cell."""
        scaled = self.m * self.widths
        return bool(np.all(scaled > c) and np.all(scaled < C1))

    def locate(self, x) -> np.ndarray:
        """Zero-based cell indices of the points ``x`` (vectorized)."""
        x = np.asarray(x, dtype=float)
        if x.size and (np.any(~(x >= 0.0)) or np.any(~(x <= 1.0))):
            raise DomainError("points must lie in [0, 1]")
        idx = np.searchsorted(self.edges, x, side="right") - 1
        return np.minimum(idx, self.m - 1)

    def same_as(self, other: Partition) -> bool:
        return self is other or (
            self.m == other.m and np.array_equal(self.edges, other.edges)
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Partition) and self.same_as(other)

    def __hash__(self) -> int:
        return hash(self.edges.tobytes())

    def __repr__(self) -> str:
        return f"Partition(m={self.m}, balance_ratio={self.balance_ratio:.3g})"


def equal_partition(m: int) -> Partition:
    """Partition of [0, 1] into ``m`` cells of width ``1/m``."""
    if isinstance(m, bool) or int(m) != m or m < 2:
        raise InvalidArgument(f"need m >= 2 cells, got {m!r}")
    m = int(m)
    edges = np.arange(m + 1) / m
    edges[-1] = 1.0
    return Partition(edges)


def custom_partition(edges) -> Partition:
    """Partition with user supplied edges; see :attr:`Partition.balance_ratio`."""
    return Partition(np.asarray(edges, dtype=float))


def cell_index(part: Partition, x: float) -> int:
    """One-based index of the cell containing ``x``."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x = {x!r} is outside [0, 1]")
    return int(part.locate(x)) + 1


def phi_eval(part: Partition, j: int, x: float) -> float:
    """Centered indicator ``1{x in cell j} - p_j`` with one-based ``j``."""
    if isinstance(j, bool) or int(j) != j or not 1 <= j <= part.m:
        raise InvalidArgument(f"cell index {j!r} not in 1..{part.m}")
    p = part.widths[j - 1]
    return float((cell_index(part, x) == j) - p)
