"""Brute-force oracles for the closed-form moment and decomposition identities.

Each check recomputes a quantity along an independent route (enumerating cell
outcomes or multinomial count vectors, or summing over observation pairs) and
reports the largest absolute disagreement with the library formula.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import Partition, custom_partition, equal_partition
from .density import AlternativePair, CellDensity, project_thetas, sample
from .moments import bias_term, exact_mean_t1, exact_mean_t2, phi_moments
from .statistics import TwoSampleCounts, Weights, decompose, t1_stat, t2_stat, tally, w_term

__all__ = [
    "OracleResult",
    "moment_oracle",
    "decomposition_oracle",
    "exact_mean_oracle",
    "run_all",
]


@dataclass(frozen=True)
class OracleResult:
    name: str
    cases: int
    max_abs_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_abs_error <= self.tolerance)


def _enumerate_one(p, q, p2=None, q2=None):
    """Outcomes ``(prob, phi_j, phi_k)`` of one observation: in j, in k, elsewhere."""
    if p2 is None:
        return [(q, 1.0 - p, None), (1.0 - q, -p, None)]
    return [
        (q, 1.0 - p, -p2),
        (q2, -p, 1.0 - p2),
        (1.0 - q - q2, -p, -p2),
    ]


def _random_cell_pair(rng):
    p = rng.uniform(0.02, 0.5)
    p2 = rng.uniform(0.02, 1.0 - p - 0.01)
    # keep the two cells' total mass below one so "elsewhere" is a valid outcome
    q = rng.uniform(0.0, 1.0) * min(1.0, 2 * p)
    q2 = rng.uniform(0.0, 1.0) * min(1.0 - q, 2 * p2)
    return p, q / p - 1.0, p2, q2 / p2 - 1.0


def moment_oracle(cases: int = 50, seed: int = 0) -> OracleResult:
    """Single-observation moments against enumeration over cell outcomes."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        p, th, p2, th2 = _random_cell_pair(rng)
        q, q2 = p * (1 + th), p2 * (1 + th2)
        mom = phi_moments(p, th, p2, th2)
        out = _enumerate_one(p, q, p2, q2)
        e1 = sum(w * a for w, a, _ in out)
        e2 = sum(w * a * a for w, a, _ in out)
        e4 = sum(w * (a - e1) ** 4 for w, a, _ in out)
        e1b = sum(w * b for w, _, b in out)
        cross = sum(w * a * b for w, a, b in out)
        cross4 = sum(w * (a - e1) ** 2 * (b - e1b) ** 2 for w, a, b in out)
        for got, want in ((mom.m1, e1), (mom.m2, e2), (mom.m4, e4),
                          (mom.cross, cross), (mom.cross4, cross4)):
            worst = max(worst, abs(got - want))
    return OracleResult("basis_moments", cases, float(worst), 1e-12)


def _phi_matrix(part: Partition, pts: np.ndarray) -> np.ndarray:
    # rows: observations, columns: cells
    ind = np.zeros((pts.size, part.m))
    for i, x in enumerate(pts):
        j = min(int(np.searchsorted(part.edges, x, side="right")) - 1, part.m - 1)
        ind[i, j] = 1.0
    return ind - part.widths


def _random_partition(rng, m: int) -> Partition:
    if m == 2 and rng.random() < 0.5:
        return equal_partition(2)
    cuts = np.sort(rng.uniform(0.15, 0.85, size=m - 1))
    while np.any(np.diff(np.r_[0.0, cuts, 1.0]) < 0.1):
        cuts = np.sort(rng.uniform(0.1, 0.9, size=m - 1))
    return custom_partition(np.r_[0.0, cuts, 1.0])


def _random_density(rng, part: Partition) -> CellDensity:
    raw = rng.uniform(-0.45, 0.45, size=part.m)
    return project_thetas(part, raw - raw @ part.widths)


def brute_force_parts(part, xs, ys, g, theta, tau):
    """Statistic and its four parts by explicit sums over observations."""
    n, l = xs.size, ys.size
    p = part.widths
    phx = _phi_matrix(part, xs)
    phy = _phi_matrix(part, ys)
    # the statistic from its definition: n sum g (int phi d(Fn - Gl))^2 / p
    diff = phx.mean(axis=0) - phy.mean(axis=0)
    stat = n * np.sum(g * diff**2 / p)
    bx = phx - theta * p
    by = phy - tau * p
    eta = theta - tau
    off = 0.0
    for i1 in range(n):
        for i2 in range(i1 + 1, n):
            off += 2.0 / n * np.sum(g * bx[i1] * bx[i2] / p)
    for i1 in range(l):
        for i2 in range(i1 + 1, l):
            off += 2.0 * n / l**2 * np.sum(g * by[i1] * by[i2] / p)
    for i1 in range(n):
        for i2 in range(l):
            off -= 2.0 / l * np.sum(g * bx[i1] * by[i2] / p)
    lin = 2.0 * n * np.sum(g * eta * (bx.mean(axis=0) - by.mean(axis=0)))
    shift = n * np.sum(g * p * eta**2)
    diag = sum(np.sum(g * bx[i] ** 2 / p) for i in range(n)) / n
    diag += n / l**2 * sum(np.sum(g * by[i] ** 2 / p) for i in range(l))
    return stat, (off, lin, shift, diag)


def decomposition_oracle(cases: int = 100, seed: int = 1) -> OracleResult:
    """``T2 = off + linear + shift + diag`` by explicit double sums on tiny samples."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        m = int(rng.integers(2, 4))
        part = _random_partition(rng, m)
        f, gd = _random_density(rng, part), _random_density(rng, part)
        n, l = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        xs, ys = sample(f, n, rng), sample(gd, l, rng)
        g = rng.uniform(0.5, 2.0, size=m) if rng.random() < 0.5 else np.ones(m)
        w = Weights(g)
        stat, parts = brute_force_parts(part, xs, ys, g, f.theta, gd.theta)
        c = tally(part, xs, ys)
        lib = decompose(c, w, f.theta, gd.theta)
        errs = [abs(stat - t2_stat(c, w)), abs(stat - sum(parts)), abs(lib.total - stat)]
        errs += [abs(u - v) for u, v in zip(lib, parts)]
        errs.append(abs(w_term(c, w, f.theta, gd.theta) - parts[3]))
        if part.m * part.widths.min() == part.m * part.widths.max():
            errs.append(abs(t1_stat(c) - t2_stat(c)))
        worst = max(worst, *errs)
    return OracleResult("decomposition_identity", cases, float(worst), 1e-10)


def _compositions(total: int, parts: int):
    for cut in itertools.combinations(range(total + parts - 1), parts - 1):
        bounds = (-1, *cut, total + parts - 1)
        yield tuple(b - a - 1 for a, b in zip(bounds[:-1], bounds[1:]))


def _multinomial_pmf(counts, probs) -> float:
    coef = math.factorial(sum(counts))
    out = 1.0
    for k, q in zip(counts, probs):
        coef //= math.factorial(k)
        out *= q**k
    return coef * out


def enumerate_expectations(pair: AlternativePair, n: int, l: int, w: Weights | None = None):
    """``E T1``, ``E T2`` and ``E W`` (true centering) by summing over all count vectors."""
    part = pair.part
    r, s = pair.f.masses, pair.g.masses
    et1 = et2 = ew = 0.0
    xs_all = [(cx, _multinomial_pmf(cx, r)) for cx in _compositions(n, part.m)]
    ys_all = [(cy, _multinomial_pmf(cy, s)) for cy in _compositions(l, part.m)]
    for cx, px in xs_all:
        for cy, py in ys_all:
            prob = px * py
            if prob == 0.0:
                continue
            c = TwoSampleCounts(part, cx, cy)
            et1 += prob * t1_stat(c)
            et2 += prob * t2_stat(c, w)
            ew += prob * w_term(c, w, pair.theta, pair.tau)
    return et1, et2, ew


def exact_mean_oracle(cases: int = 20, seed: int = 2, n: int = 3, l: int = 3) -> OracleResult:
    """Closed-form means against full multinomial enumeration (m = 2 and 3)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for case in range(cases):
        m = 2 + case % 2
        part = _random_partition(rng, m)
        f, gd = _random_density(rng, part), _random_density(rng, part)
        if case == 0:
            part = equal_partition(2)
            f = gd = project_thetas(part, np.zeros(2))
        pair = AlternativePair(f, gd)
        w = Weights(rng.uniform(0.5, 2.0, size=part.m))
        et1, et2, ew = enumerate_expectations(pair, n, l, w)
        errs = [
            abs(et1 - exact_mean_t1(pair, n, l)),
            abs(et2 - exact_mean_t2(pair, n, l, w)),
            abs(ew - bias_term(pair, n, l, w, "exact")),
        ]
        if case == 0:
            errs.append(abs(et1 - (part.m - 1) * (1 + n / l)))
        worst = max(worst, *errs)
    return OracleResult("exact_means", cases, float(worst), 1e-12)


def run_all(deep: bool = False, seed: int = 0) -> list[OracleResult]:
    scale = 10 if deep else 1
    return [
        moment_oracle(50 * scale, seed),
        decomposition_oracle(100 * scale, seed + 1),
        exact_mean_oracle(20 * scale, seed + 2),
    ]
